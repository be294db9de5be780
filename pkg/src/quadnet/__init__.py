"""Networks of coupled quadratic maps: escape-time set rendering and
topology analysis for their Mandelbrot/Julia-type sets."""

from .config import (ConfigError, JobSpec, ModelDescriptor, parse_config,
                     serialize_config)
from .io import Manifest, read_voxels, write_image, write_metrics, write_voxels
from .jobs import JobError, run_job
from .model import (HARD_MAGNITUDE_CAP, DimensionError, EscapeRecord, NodeStatus,
                    bipartite, feedback, iterate_escape, random_bipartite, self_drive,
                    simple_dual, step, weighted_inputs)
from .oracle import RationalComplex, classify_point_exact, exact_orbit
from .render import (Box3D, Field2D, Field3D, Window2D, extract_boundary,
                     render_equi_m, render_multi_j_real, render_multi_m_real,
                     render_uni_j)
from .topology import (ComponentLabeling, DimensionEstimate, EqualityReport,
                       RelationReport, box_counting_dim, equality_relation,
                       label_components, nesting_check, subset_relation)
from .verify import VerifyResult, run_check

__version__ = "0.1.0"

__all__ = [
    "Box3D", "ComponentLabeling", "ConfigError", "DimensionError",
    "DimensionEstimate", "EqualityReport", "EscapeRecord", "Field2D", "Field3D",
    "HARD_MAGNITUDE_CAP", "JobError", "JobSpec", "Manifest", "ModelDescriptor",
    "NodeStatus", "RationalComplex", "RelationReport", "VerifyResult", "Window2D",
    "bipartite", "box_counting_dim", "classify_point_exact", "equality_relation",
    "exact_orbit", "extract_boundary", "feedback", "iterate_escape",
    "label_components", "nesting_check", "parse_config", "random_bipartite",
    "read_voxels", "render_equi_m", "render_multi_j_real", "render_multi_m_real",
    "render_uni_j", "run_check", "run_job", "self_drive", "serialize_config",
    "simple_dual", "step", "subset_relation", "weighted_inputs", "write_image",
    "write_metrics", "write_voxels", "__version__",
]
