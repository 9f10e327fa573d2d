"""String topology of simply connected manifolds from rational models.

Exact rational computations of loop homology, the loop product, the string
bracket, the intersection morphism and Hochschild cohomology, from Sullivan
models (``cohomology``, ``models``, ``string_topology``) or from DG Lie models
(``lie``, ``ce``, ``hochschild``, ``lie_models``, ``diagrams``).
"""

from .cohomology import SullivanModel
from .lie import DGLieAlgebra
from .modelfile import format_model, load_model, parse_model

__all__ = ["SullivanModel", "DGLieAlgebra", "parse_model", "format_model", "load_model"]
__version__ = "0.1.0"
