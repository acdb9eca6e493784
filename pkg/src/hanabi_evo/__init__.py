"""Hanabi simulator, rule-based agents and a genetic algorithm over rule orderings."""

__version__ = "0.1.0"
