"""Tests for epsk."""
