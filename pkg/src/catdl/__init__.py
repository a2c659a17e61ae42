"""Categorical description-logic reasoning for SH and EL→."""

from __future__ import annotations

from loguru import logger

from .terms import ConceptTerm, TermFactory
from .parser import parse_concept, print_ontology, parse_ontology
from .ontology import Ontology
from .el_engine import saturate_el, entails_el
from .sh_engine import saturate_sh, is_concept_unsat_sh
from .el_tableau import elbot_entails, elbot_consistent
from .sh_tableau import tableau_consistent


logger.disable("catdl")
