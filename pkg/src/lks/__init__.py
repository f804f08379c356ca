"""Constructive tree embeddings for the Loebl-Komlos-Sos setting, with a brute-force
oracle, extremal constructions and small-scale verification harnesses."""

__version__ = "0.1.0"
