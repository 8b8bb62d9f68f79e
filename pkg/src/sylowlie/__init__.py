"""Sylow p-subgroups of G2(q) and PSU4(q) as exact computational objects."""
