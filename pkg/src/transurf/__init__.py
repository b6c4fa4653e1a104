"""Translation surfaces of framed space curves: singular loci and their
classification (cross caps, S1 points, cuspidal edges and relatives)."""

__version__ = "0.1.0"
