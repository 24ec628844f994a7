"""Exact-arithmetic toolkit for flat G2 orbifolds and the formality of their resolutions."""

from ._cobordismMassey import (
	CobordismDatum,
	MasseyVerdict,
	boundary,
	intersections,
	masseyValue,
	tripleMassey,
)
from ._cohomology import (
	CohomologySpace,
	betti,
	invariantBasis,
	pairingMatrix,
	poincareDual,
	stratumCohomology,
)
from ._config import G2Config, loadConfig, parseConfig
from ._errors import (
	CobordismError,
	ConfigError,
	DegeneratePairingError,
	G2kitError,
	MasseyNotWellDefined,
	NonTransverseError,
	PipelineError,
)
from ._exteriorAlgebra import Form, pullback, restrict, standardG2Form, wedge
from ._flatOrbifold import AffineIsometry, IsometryGroup, TorusLattice, closure, compose, validate
from ._integration import integrateOrbifold, integrateStratum, integrateSubtorus
from ._presets import presetDocument, presetNames
from ._report import formalityReport
from ._resolutionAlgebra import THOM_SQUARE, ModelClass, ResolutionModel
from ._singularLocus import AffineSubtorus, Stratum, actOnSubtorus, fixedSet, strata
from .cli import main, run

__all__ = [
	"THOM_SQUARE",
	"AffineIsometry",
	"AffineSubtorus",
	"CobordismDatum",
	"CobordismError",
	"CohomologySpace",
	"ConfigError",
	"DegeneratePairingError",
	"Form",
	"G2Config",
	"G2kitError",
	"IsometryGroup",
	"MasseyNotWellDefined",
	"MasseyVerdict",
	"ModelClass",
	"NonTransverseError",
	"PipelineError",
	"ResolutionModel",
	"Stratum",
	"TorusLattice",
	"actOnSubtorus",
	"betti",
	"boundary",
	"closure",
	"compose",
	"fixedSet",
	"formalityReport",
	"integrateOrbifold",
	"integrateStratum",
	"integrateSubtorus",
	"intersections",
	"invariantBasis",
	"loadConfig",
	"main",
	"masseyValue",
	"pairingMatrix",
	"parseConfig",
	"poincareDual",
	"presetDocument",
	"presetNames",
	"pullback",
	"restrict",
	"run",
	"standardG2Form",
	"strata",
	"stratumCohomology",
	"tripleMassey",
	"validate",
	"wedge",
]
