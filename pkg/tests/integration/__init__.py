"""Integration tests package."""


