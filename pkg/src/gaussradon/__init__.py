"""Gaussian measures on affine subspaces of a weighted sequence space,
the hyperplane transform of exponential test functions by three
independent routes, and the truncation-tower and support-recovery
machinery built on top of them."""

from .balls import DualBall, ProjectiveCompactSet, offside
from .functionals import ExponentialFunctional
from .hermite import HermiteBasis
from .measures import (GaussianSampler, ball_mass_estimate, char_fn,
                       s_transform_delta, translate_density)
from .support import (BumpFunction, DeltaConvReport, Sinogram, SinogramRow,
                      SlabConstraint, classical_sinogram, delta_conv_check,
                      sinogram_gen, support_recover)
from .tower import (AffineSubspace, ComplexCoordVec, CoordVec, EigenSchedule,
                    complement_within, norm_p, pairing, project_affine)
from .transform import (QuadratureSpec, TransformResult, disintegrate_eval,
                        f_n_eval, gauss_hermite_rule, radon_closed, radon_mc,
                        radon_rn_quadrature)

__version__ = "0.1.0"

__all__ = [
    "AffineSubspace",
    "BumpFunction",
    "ComplexCoordVec",
    "CoordVec",
    "DeltaConvReport",
    "DualBall",
    "EigenSchedule",
    "ExponentialFunctional",
    "GaussianSampler",
    "HermiteBasis",
    "ProjectiveCompactSet",
    "QuadratureSpec",
    "Sinogram",
    "SinogramRow",
    "SlabConstraint",
    "TransformResult",
    "ball_mass_estimate",
    "char_fn",
    "classical_sinogram",
    "complement_within",
    "delta_conv_check",
    "disintegrate_eval",
    "f_n_eval",
    "gauss_hermite_rule",
    "norm_p",
    "offside",
    "pairing",
    "project_affine",
    "radon_closed",
    "radon_mc",
    "radon_rn_quadrature",
    "s_transform_delta",
    "sinogram_gen",
    "support_recover",
    "translate_density",
    "__version__",
]
