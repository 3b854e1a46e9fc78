"""Exact homological algebra for finite groups: bar resolutions, group
homology, graded algebras, spectral sequences and orbit complexes."""

from .errors import HomAlgError
from .exactla import FinAbGroup, GF, Matrix, QQ, ZZ, smith_normal_form
from .groupcore import (FiniteGroup, cyclic, dihedral, direct_product, general_linear_group,
                        parse_group, quaternion, symmetric)
from .gmodule import GModule, trivial_module
from .complexes import ChainComplex, bar_resolution, ordered_simplicial
from .homology import group_cohomology, group_homology

__version__ = "0.1.0"
