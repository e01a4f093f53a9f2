"""Doubly stochastic balancing."""

from .sinkhorn import BalancedMatrix, SupportDiagnosis, check_support, sinkhorn_knopp

__all__ = ["BalancedMatrix", "SupportDiagnosis", "check_support", "sinkhorn_knopp"]
