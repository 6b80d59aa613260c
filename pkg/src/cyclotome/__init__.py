"""Cyclotomic tournaments: construction, certification, spectra, and sweeps."""
