use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("empty triangulation")]
    EmptyTriangulation,
    #[error("tetrahedron {tet} face {face}: target tetrahedron {target} out of range")]
    IndexOutOfRange { tet: usize, face: usize, target: i64 },
    #[error("tetrahedron {tet} face {face}: permutation {perm:?} is not a bijection of 0123")]
    BadPermutation { tet: usize, face: usize, perm: String },
    #[error("invalid triangulation: {0}")]
    Invalid(ValidationReport),
    #[error("vector length {found} does not match expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("expected {expected} coordinates")]
    TheoryMismatch { expected: &'static str },
    #[error("matching equations violated")]
    NotInKernel,
    #[error("not in the nonnegative cone")]
    Negative,
    #[error("coordinates are not integral")]
    NotIntegral,
    #[error("not admissible: tetrahedron {tet} carries quad kinds {kinds:?}")]
    Inadmissible { tet: usize, kinds: Vec<usize> },
    #[error("incompatible vectors: tetrahedron {tet} would carry quad kinds {kinds:?}")]
    Incompatible { tet: usize, kinds: Vec<usize> },
    #[error("coordinate mismatch between surface and target")]
    CoordinateMismatch,
    #[error("class dimension mismatch: expected {expected}, found {found}")]
    ClassDimension { expected: usize, found: usize },
    #[error("class must have integral coordinates")]
    NonIntegralClass,
    #[error("norm ball degenerate or hypotheses violated")]
    DegenerateBall,
    #[error("norm evaluation requires the strict variant of the ball")]
    WrongVariant,
}

impl Error {
    /// Stable machine-readable identifier, used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax(_) => "syntax",
            Error::EmptyTriangulation => "empty_triangulation",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::BadPermutation { .. } => "bad_permutation",
            Error::Invalid(_) => "invalid_triangulation",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::TheoryMismatch { .. } => "theory_mismatch",
            Error::NotInKernel => "not_in_kernel",
            Error::Negative => "negative",
            Error::NotIntegral => "not_integral",
            Error::Inadmissible { .. } => "inadmissible",
            Error::Incompatible { .. } => "incompatible",
            Error::CoordinateMismatch => "coordinate_mismatch",
            Error::ClassDimension { .. } => "class_dimension_mismatch",
            Error::NonIntegralClass => "non_integral_class",
            Error::DegenerateBall => "degenerate_ball",
            Error::WrongVariant => "wrong_variant",
        }
    }
}

/// One reason a triangulation was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    Unglued { tet: usize, face: usize },
    FaceGluedToItself { tet: usize, face: usize },
    NotInvolutive { tet: usize, face: usize },
    EdgeReversed { tet: usize, edge: usize },
    NonOrientable { tet: usize, face: usize },
    VertexLinkNotSphere { vertex: usize, euler: i64 },
    Disconnected { components: usize },
}

impl ValidationFailure {
    pub fn code(&self) -> &'static str {
        match self {
            ValidationFailure::Unglued { .. } => "not_closed",
            ValidationFailure::FaceGluedToItself { .. } => "face_glued_to_itself",
            ValidationFailure::NotInvolutive { .. } => "not_involutive",
            ValidationFailure::EdgeReversed { .. } => "edge_reversed",
            ValidationFailure::NonOrientable { .. } => "non_orientable",
            ValidationFailure::VertexLinkNotSphere { .. } => "vertex_link_not_sphere",
            ValidationFailure::Disconnected { .. } => "disconnected",
        }
    }
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFailure::Unglued { tet, face } => {
                write!(f, "tetrahedron {tet} face {face} is unglued (not closed)")
            }
            ValidationFailure::FaceGluedToItself { tet, face } => {
                write!(f, "tetrahedron {tet} face {face} is glued to itself")
            }
            ValidationFailure::NotInvolutive { tet, face } => {
                write!(f, "gluing of tetrahedron {tet} face {face} is not matched by its reverse")
            }
            ValidationFailure::EdgeReversed { tet, edge } => {
                write!(f, "edge {edge} of tetrahedron {tet} is identified with itself in reverse")
            }
            ValidationFailure::NonOrientable { tet, face } => {
                write!(f, "orientation conflict across tetrahedron {tet} face {face}")
            }
            ValidationFailure::VertexLinkNotSphere { vertex, euler } => {
                write!(f, "link of vertex class {vertex} has Euler characteristic {euler}, not 2")
            }
            ValidationFailure::Disconnected { components } => {
                write!(f, "triangulation has {components} connected components")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.failures.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

impl std::error::Error for ValidationReport {}
