"""Bundled structure fixtures and the JSON report schema for the malg package."""
