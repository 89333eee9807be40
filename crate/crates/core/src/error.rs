use thiserror::Error;

/// Defects reported by surface construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("fundamental polygon must be a strictly convex counter-clockwise polygon with at least 3 vertices")]
    BadPolygon,
    #[error("identification references edge {0}, which does not exist")]
    EdgeOutOfRange(usize),
    #[error("identifications are not an involution: edge {0} is paired more than once or with itself")]
    NonInvolutive(usize),
    #[error("identification of edges {0} and {1} is orientation-preserving along the boundary; only orientable gluings (flag -1) are supported")]
    NonOrientable(usize, usize),
    #[error("hole {0} is not a simple polygon with at least 3 vertices")]
    BadHole(usize),
    #[error("hole {0} is not strictly inside the fundamental polygon")]
    HoleOutside(usize),
    #[error("holes {0} and {1} overlap")]
    OverlappingHoles(usize, usize),
    #[error("cell structure gives boundary count {computed}, declared {declared}")]
    BoundaryMismatch { computed: i64, declared: i64 },
    #[error("Euler characteristic {computed} does not match 2 - 2g - b = {expected}")]
    EulerMismatch { computed: i64, expected: i64 },
}

/// First violation found when validating a curve or arc.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveDefect {
    #[error("curve needs at least two waypoints and one segment")]
    TooShort,
    #[error("waypoint {0} lies outside the surface")]
    Outside(usize),
    #[error("waypoint {0} lies on a polygon or hole corner")]
    OnCorner(usize),
    #[error("arc endpoint {0} is not on the boundary")]
    EndpointOffBoundary(usize),
    #[error("waypoint {0} lies on the boundary but is not an arc endpoint")]
    InteriorOnBoundary(usize),
    #[error("waypoints {0} and {1} coincide")]
    Repeated(usize, usize),
    #[error("segment {0} runs along a polygon edge")]
    AlongEdge(usize),
    #[error("segment {0} crosses a hole")]
    CrossesHole(usize),
    #[error("segments {0} and {1} intersect")]
    SelfIntersection(usize, usize),
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("invalid curve: {0}")]
    Curve(#[from] CurveDefect),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("surface S_{{{genus},{boundary}}} is not admissible for arc flows")]
    Inadmissible { genus: u32, boundary: u32 },
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit status: 1 for malformed input, 2 for everything the
    /// operations reject by contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Surface(_) | Error::Curve(_) => 1,
            _ => 2,
        }
    }
}
