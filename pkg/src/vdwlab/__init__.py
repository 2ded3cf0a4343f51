"""vdwlab: torus-annulus two-colourings of [N] with no blue 3-term
progression, their exact verifiers, and the supporting machinery —
lattice geometry, diophantine orbit checks, random quadratic-form gap
experiments, clique packings and Fourier cutoffs."""

from .coloring import (
    ApWitness,
    Colouring,
    ap_is_monochromatic,
    find_blue_3ap,
    longest_mono_ap,
)
from .torus import (
    AnnulusSystem,
    SymCoeffs,
    TorusPoint,
    annulus_contains,
    behrend_colouring,
    build_colouring,
    folklore_colouring,
    green_wolf_colouring,
    sample_centres,
    sigma,
)

__version__ = "0.1.0"

__all__ = [
    "ApWitness",
    "Colouring",
    "ap_is_monochromatic",
    "find_blue_3ap",
    "longest_mono_ap",
    "AnnulusSystem",
    "SymCoeffs",
    "TorusPoint",
    "annulus_contains",
    "behrend_colouring",
    "build_colouring",
    "folklore_colouring",
    "green_wolf_colouring",
    "sample_centres",
    "sigma",
    "__version__",
]
