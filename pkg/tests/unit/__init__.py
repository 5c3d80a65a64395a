"""Unit tests package."""


