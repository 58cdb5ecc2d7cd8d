"""
MFDH Retrieval - multi-view feature discrete hashing for cross-modal search.
"""

__version__ = "1.0.0"
