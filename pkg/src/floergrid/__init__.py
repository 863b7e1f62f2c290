"""Grid-diagram Floer complexes and tau invariants for balanced spatial graphs.

Core surface:

* :mod:`floergrid.grid`      -- grid diagrams: parsing, validation, components
* :mod:`floergrid.moves`     -- isotopy and cobordism grid moves
* :mod:`floergrid.f2`        -- bit-packed GF(2) linear algebra
* :mod:`floergrid.floer`     -- generators, gradings, differentials
* :mod:`floergrid.pentagons` -- commutation chain maps and homotopies
* :mod:`floergrid.homology`  -- filtered homology, symmetrization, tau
* :mod:`floergrid.cobordism` -- link gradings, cobordism scripts, slice checks
* :mod:`floergrid.cli`       -- command-line interface
"""

from floergrid.grid import GridDiagram, Marking, parse_grid, serialize_grid, validate, weights, components
from floergrid.moves import GridMove, apply_move, parse_move, parse_move_script
from floergrid.floer import (
    Generator,
    ChainElement,
    generators,
    pairing,
    maslov,
    alexander,
    alexander_relative,
    empty_rectangles,
    d_minus,
    d_hat,
    d_graded,
)
from floergrid.homology import (
    chain_basis,
    boundary_matrix,
    graded_homology,
    symmetrize,
    iota_nontrivial,
    tau,
    hat_homology_dims,
)
from floergrid.cobordism import alexander_prime, tau_prime, run_script, slice_obstruction

__all__ = [
    "GridDiagram",
    "Marking",
    "parse_grid",
    "serialize_grid",
    "validate",
    "weights",
    "components",
    "GridMove",
    "apply_move",
    "parse_move",
    "parse_move_script",
    "Generator",
    "ChainElement",
    "generators",
    "pairing",
    "maslov",
    "alexander",
    "alexander_relative",
    "empty_rectangles",
    "d_minus",
    "d_hat",
    "d_graded",
    "chain_basis",
    "boundary_matrix",
    "graded_homology",
    "symmetrize",
    "iota_nontrivial",
    "tau",
    "hat_homology_dims",
    "alexander_prime",
    "tau_prime",
    "run_script",
    "slice_obstruction",
]

__version__ = "0.1.0"
