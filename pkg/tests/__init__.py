"""Tests package for kirwan-facets."""


