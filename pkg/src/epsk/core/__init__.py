"""Syntax, proof checking and the natural deduction translations."""
