"""Certified growth-rate bounds for power-free languages."""

from growthbound.exponent import (
    Classification,
    RationalExponent,
    TaskSpec,
    classify,
    forbidden_length,
    parse_exponent,
)
from growthbound.checker import ends_with_forbidden_power, has_period, is_allowed
from growthbound.graph import FactorGraph, SccPartition, build_graph, canonical_form, scc_decompose
from growthbound.spectral import Enclosure, spectral_enclosure
from growthbound.counting import CountSeries, brute_count, fekete_check, graph_count
from growthbound.estimation import GrowthRecord, aitken, jump_interval, run_series

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "CountSeries",
    "Enclosure",
    "FactorGraph",
    "GrowthRecord",
    "RationalExponent",
    "SccPartition",
    "TaskSpec",
    "aitken",
    "brute_count",
    "build_graph",
    "canonical_form",
    "classify",
    "ends_with_forbidden_power",
    "fekete_check",
    "forbidden_length",
    "graph_count",
    "has_period",
    "is_allowed",
    "jump_interval",
    "parse_exponent",
    "run_series",
    "scc_decompose",
    "spectral_enclosure",
]
