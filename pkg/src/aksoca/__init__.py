"""Finite realizability structures, ordered combinatory algebras and the constructions between them."""
from __future__ import annotations

from .aks import AbstractKrivineStructure, derived_combinators, saturate, validate_aks
from .constructions import aks_to_foca_bullet, aks_to_ioca_perp, foca_to_aks, heyting_from_aks
from .errors import (AksocaError, AxiomViolationError, CarrierMismatchError, EnumerationCapError,
                     FamilyMembershipError, InstanceFormatError, NotFocaError, OcaStructureError,
                     UnboundVariableError)
from .generators import (GeneratorParams, HeytingParams, VectorPolarityParams, gen_heyting_aks, gen_random_aks,
                         gen_vector_polarity)
from .indexed import IndexedPredicate, entails_aks, entails_oca, reindex
from .instance_io import load_instance, parse_instance, save_instance, serialize_instance
from .oca import FiniteOca, OcaClass, classify_oca, sharp
from .polarity import Carrier, ClosureKind, RealizabilityLattice, Subset, enumerate_closed
from .reports import CheckReport
from .suite import SuiteOptions, run_suite

__version__ = "0.1.0"
