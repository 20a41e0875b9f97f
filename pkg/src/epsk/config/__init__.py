"""Configuration module for epsk."""
