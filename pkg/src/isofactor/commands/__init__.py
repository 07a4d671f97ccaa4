"""Commands module for isofactor."""
