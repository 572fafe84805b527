"""
Bloch POVM Toolkit
Bloch-vector calculus for qubit POVMs: validity, probabilities,
rank-1 decomposition, unambiguous discrimination, sampling and figures.
"""
