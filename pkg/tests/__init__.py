"""Test package for isofactor."""
