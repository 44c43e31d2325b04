"""Quasi-isometric embeddings of right-angled Artin groups into pure braid groups."""
