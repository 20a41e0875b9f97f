"""Serialization, corpus files and random generators."""
