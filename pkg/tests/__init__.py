"""Tests for the Alpha Copilot Social Agent.

Run tests with: pytest tests/ -v
"""
