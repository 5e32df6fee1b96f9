"""Unit tests for ASVS Compliance Tools."""
