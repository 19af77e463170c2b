"""Vector diffusion maps: tangent frames by local PCA, orthogonal alignment,
connection-Laplacian spectra, vector diffusion distances and extensions."""

from .alignment import AlignmentGraph, align_frames, closest_orthogonal
from .embedding import (DmEmbedding, VdmEmbedding, dm_distance, dm_embed, vdm_angular_distance,
                        vdm_distance, vdm_embed)
from .errors import (DataError, EigensolverError, IllConditionedEdgeError,
                     InsufficientNeighborsError, NumericalError, SchemaVersionError, VdmError)
from .geodesic import GeodesicResult, dijkstra
from .kernels import DEFAULT_KERNEL, KernelSpec
from .manifolds import ManifoldSpec, PointCloud, analytic_sphere_coords, sample
from .neighbors import NeighborGraph, build_graph
from .nystrom import ExtensionConfig, Extender, SampledVectorField, extend_field, project_field
from .operator import VdmOperator, apply_avg, apply_sym, build
from .oracle import SphereSpectrumTable, predicted_multiplicities, s2_table, sphere_table
from .pipeline import PipelineParams, PipelineResult, run_pipeline
from .spectral import (MultiplicityProfile, Spectrum, detect_multiplicities, eigensolve,
                       repair_degeneracy)
from .tangent import LocalPcaReport, TangentFrames, estimate_dimension, local_pca

__version__ = "0.1.0"
