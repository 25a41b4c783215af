"""Eisenstein-Kronecker numbers and the A-infinity structure of an elliptic curve."""
