"""Sim module: closed-loop engine, settling measurement, Monte-Carlo batches."""
