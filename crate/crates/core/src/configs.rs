//! Decorated immersed loops: fiber-cycle states, configuration tokens,
//! and the invariants of the fibered Lagrangians they encode.
//!
//! A `FiberedLagrangian` is a closed planar loop (exact rational
//! coordinates) decorated with a positioned word of configuration tokens.
//! Transporting a fiber-cycle state through the word gives the holonomy;
//! closure decides orientability, token bookkeeping gives the Maslov
//! class, and crossing states drive embeddedness checks, homology
//! pairings and crossing classifications.

use crate::plane::{self, Polyline, Pt, Q};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Isotopy class of a vanishing circle in the reference fiber.
///
/// `A` meets every other label; `B`, `C`, `D` are pairwise disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Label {
    A,
    B,
    C,
    D,
}

impl Label {
    pub fn letter(self) -> char {
        match self {
            Label::A => 'a',
            Label::B => 'b',
            Label::C => 'c',
            Label::D => 'd',
        }
    }
}

/// Whether two labels can be made disjoint in the fiber.
pub fn labels_disjoint(x: Label, y: Label) -> bool {
    use Label::*;
    matches!((x, y), (B, C) | (C, B) | (B, D) | (D, B) | (C, D) | (D, C))
}

/// An oriented fiber circle carried along an arc of the base loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FiberState {
    pub label: Label,
    /// Orientation sign, `+1` or `-1`.
    pub orient: i8,
}

impl FiberState {
    pub fn new(label: Label, orient: i8) -> Self {
        assert!(orient == 1 || orient == -1);
        FiberState { label, orient }
    }
}

impl fmt::Display for FiberState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.label.letter(), if self.orient > 0 { "+" } else { "-" })
    }
}

/// Kind of a basic configuration the loop traverses.
///
/// Swap kinds exchange the two named labels and preserve orientation;
/// reflect kinds fix the label and flip its orientation. A state whose
/// label is not acted on passes through only if it is disjoint from the
/// cycles named by the kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TokenKind {
    BB,
    BC,
    CC,
    BD,
    CD,
    DD,
}

impl TokenKind {
    /// Labels the configuration's local model involves.
    pub fn acts_on(self) -> (Label, Label) {
        use Label::*;
        match self {
            TokenKind::BB => (B, B),
            TokenKind::BC => (B, C),
            TokenKind::CC => (C, C),
            TokenKind::BD => (B, D),
            TokenKind::CD => (C, D),
            TokenKind::DD => (D, D),
        }
    }

    pub fn is_swap(self) -> bool {
        matches!(self, TokenKind::BC | TokenKind::BD | TokenKind::CD)
    }

    pub fn name(self) -> &'static str {
        match self {
            TokenKind::BB => "BB",
            TokenKind::BC => "BC",
            TokenKind::CC => "CC",
            TokenKind::BD => "BD",
            TokenKind::CD => "CD",
            TokenKind::DD => "DD",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "BB" => Some(TokenKind::BB),
            "BC" | "CB" => Some(TokenKind::BC),
            "CC" => Some(TokenKind::CC),
            "BD" | "DB" => Some(TokenKind::BD),
            "CD" | "DC" => Some(TokenKind::CD),
            "DD" => Some(TokenKind::DD),
            _ => None,
        }
    }

    pub fn involves_d(self) -> bool {
        matches!(self, TokenKind::BD | TokenKind::CD | TokenKind::DD)
    }
}

/// A configuration token placed at an exact point of the loop.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PlacedToken {
    pub kind: TokenKind,
    /// Traversal sign: `+1` when the loop passes the configuration
    /// positively, `-1` otherwise.
    pub traversal: i8,
    /// Edge of the (normalized) loop the token sits on.
    pub edge: usize,
    /// Parameter along that edge, strictly between 0 and 1.
    pub t: Q,
}

/// Errors raised while building or interrogating a decorated loop.
#[derive(Debug, Clone)]
pub enum ConfigError {
    /// The holonomy does not return to the initial label, or the input
    /// data cannot describe a closed fibered Lagrangian.
    InvalidConstruction(String),
    /// A state met a token that neither acts on it nor lets it pass.
    IncompatibleToken { token_index: usize, kind: TokenKind, state: FiberState },
    /// Planar geometry failure (tangency, overlap, degenerate input).
    Geometry(String),
    /// The surface type violates a topological constraint.
    TopologicalObstruction(String),
    /// No positive area assignment satisfies the monotonicity equation;
    /// the named lobe would have to be stretched.
    StretchRequired { lobe: String },
    /// A matching path does not meet its designated piece exactly once.
    AmbiguousSurgery { piece: String, crossings: usize },
    /// Parameters outside a builder's domain.
    InvalidParams(String),
    /// A label forbidden under the restricted chain was used.
    ForbiddenLabel(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::InvalidConstruction(m) => write!(f, "invalid construction: {}", m),
            ConfigError::IncompatibleToken { token_index, kind, state } => write!(
                f,
                "incompatible token: state {} cannot pass token #{} of kind {}",
                state, token_index, kind.name()
            ),
            ConfigError::Geometry(m) => write!(f, "geometry error: {}", m),
            ConfigError::TopologicalObstruction(m) => write!(f, "topological obstruction: {}", m),
            ConfigError::StretchRequired { lobe } => {
                write!(f, "no monotone area assignment: stretch required in the {} lobe", lobe)
            }
            ConfigError::AmbiguousSurgery { piece, crossings } => write!(
                f,
                "ambiguous surgery: matching path meets piece {} in {} points (need exactly 1)",
                piece, crossings
            ),
            ConfigError::InvalidParams(m) => write!(f, "invalid parameters: {}", m),
            ConfigError::ForbiddenLabel(m) => write!(f, "forbidden label: {}", m),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<plane::PlaneError> for ConfigError {
    fn from(e: plane::PlaneError) -> Self {
        ConfigError::Geometry(e.to_string())
    }
}

/// Transport a fiber state through one token.
pub fn transport(
    state: FiberState,
    kind: TokenKind,
    token_index: usize,
) -> Result<FiberState, ConfigError> {
    let (x, y) = kind.acts_on();
    if kind.is_swap() {
        if state.label == x {
            return Ok(FiberState { label: y, orient: state.orient });
        }
        if state.label == y {
            return Ok(FiberState { label: x, orient: state.orient });
        }
    } else if state.label == x {
        // Reflect kind: the label is fixed, the orientation flips.
        return Ok(FiberState { label: state.label, orient: -state.orient });
    }
    // Not acted on: pass through only when disjoint from both cycles.
    if labels_disjoint(state.label, x) && (x == y || labels_disjoint(state.label, y)) {
        return Ok(state);
    }
    Err(ConfigError::IncompatibleToken { token_index, kind, state })
}

/// Surface type of a closed fibered Lagrangian or assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SurfaceType {
    Orientable { genus: usize },
    NonOrientable { cross_caps: usize },
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceType::Orientable { genus } => write!(f, "orientable surface of genus {}", genus),
            SurfaceType::NonOrientable { cross_caps } => {
                write!(f, "non-orientable surface with {} cross-caps", cross_caps)
            }
        }
    }
}

/// Construction family a loop came from (drives capacity overrides and
/// report metadata).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum BuilderKind {
    Torus { k: i64, l: i64, m: i64 },
    KleinVariant { k: i64, l: i64, m: i64, extra: i8 },
    RCarrier { k: i64, l: i64, m: i64 },
    SCarrier { n: i64, p: i64, q: i64 },
    SplicedSR { k1: i64, l1: i64 },
    Custom(String),
}

impl BuilderKind {
    pub fn name(&self) -> String {
        match self {
            BuilderKind::Torus { k, l, m } => format!("T_{{{},{},{}}}", k, l, m),
            BuilderKind::KleinVariant { k, l, m, extra } => {
                format!("K_{{{},{},{}}}{}", k, l, m, if *extra > 0 { "+" } else { "-" })
            }
            BuilderKind::RCarrier { k, l, m } => format!("R_{{{},{},{}}}", k, l, m),
            BuilderKind::SCarrier { n, p, q } => format!("S_{{{},{},{}}}", n, p, q),
            BuilderKind::SplicedSR { k1, l1 } => format!("SR_{{{},{}}}", k1, l1),
            BuilderKind::Custom(s) => s.clone(),
        }
    }
}

/// A closed immersed loop decorated with a token word and an initial
/// fiber state at its basepoint.
#[derive(Debug, Clone)]
pub struct FiberedLagrangian {
    pub kind: BuilderKind,
    pub loop_: Polyline,
    /// Tokens sorted by position along the loop.
    pub tokens: Vec<PlacedToken>,
    /// Fiber state on the arc containing the basepoint (before the first
    /// token).
    pub initial_state: FiberState,
    /// Number of matching-sphere surgery attachments recorded on this
    /// piece.
    pub surgery_marks: usize,
}

/// Position along the loop, comparable lexicographically.
pub type LoopPos = (usize, Q);

/// One self-crossing of the loop together with the transported states of
/// its two branches and the planar crossing sign.
#[derive(Debug, Clone)]
pub struct ClassifiedCrossing {
    pub point: Pt,
    pub first: (LoopPos, FiberState),
    pub second: (LoopPos, FiberState),
    pub sign: i8,
}

impl ClassifiedCrossing {
    /// Both branches carry the same label pair {B,C}/{B,D}/{C,D} with
    /// matching orientations ("green") or opposite ("blue"); other label
    /// pairs are unclassified.
    pub fn color(&self) -> Option<CrossingColor> {
        let s1 = self.first.1;
        let s2 = self.second.1;
        if !labels_disjoint(s1.label, s2.label) {
            return None;
        }
        Some(if s1.orient == s2.orient { CrossingColor::Green } else { CrossingColor::Blue })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CrossingColor {
    Green,
    Blue,
}

impl FiberedLagrangian {
    /// Build and validate: sorts tokens, checks the holonomy closes, and
    /// checks embeddedness at every self-crossing.
    pub fn new(
        kind: BuilderKind,
        loop_: Polyline,
        mut tokens: Vec<PlacedToken>,
        initial_state: FiberState,
    ) -> Result<Self, ConfigError> {
        if !loop_.is_closed() {
            return Err(ConfigError::InvalidConstruction("the base loop must be closed".into()));
        }
        tokens.sort_by(|a, b| (a.edge, a.t.clone()).cmp(&(b.edge, b.t.clone())));
        for w in tokens.windows(2) {
            if w[0].edge == w[1].edge && w[0].t == w[1].t {
                return Err(ConfigError::InvalidConstruction(
                    "two tokens occupy the same point of the loop".into(),
                ));
            }
        }
        let fl = FiberedLagrangian { kind, loop_, tokens, initial_state, surgery_marks: 0 };
        fl.holonomy()?;
        fl.check_embedded()?;
        Ok(fl)
    }

    /// Transport the initial state through the whole word. Returns the
    /// final state; closure requires its label to equal the initial one.
    pub fn holonomy(&self) -> Result<FiberState, ConfigError> {
        let mut s = self.initial_state;
        for (i, tok) in self.tokens.iter().enumerate() {
            s = transport(s, tok.kind, i)?;
        }
        if s.label != self.initial_state.label {
            return Err(ConfigError::InvalidConstruction(format!(
                "holonomy does not close: started at {}, ended at {}",
                self.initial_state, s
            )));
        }
        Ok(s)
    }

    /// `true` when the holonomy preserves orientation (torus piece).
    pub fn orientable(&self) -> Result<bool, ConfigError> {
        Ok(self.holonomy()?.orient == self.initial_state.orient)
    }

    /// Fiber state on the arc containing `pos` (transport from the
    /// basepoint through all earlier tokens).
    pub fn state_at(&self, pos: &LoopPos) -> Result<FiberState, ConfigError> {
        let mut s = self.initial_state;
        for (i, tok) in self.tokens.iter().enumerate() {
            if (tok.edge, tok.t.clone()) < (pos.0, pos.1.clone()) {
                s = transport(s, tok.kind, i)?;
            } else {
                break;
            }
        }
        Ok(s)
    }

    /// All self-crossings with transported branch states.
    pub fn classified_self_crossings(&self) -> Result<Vec<ClassifiedCrossing>, ConfigError> {
        let raw = plane::self_intersections(&self.loop_)?;
        let mut out = Vec::new();
        for c in raw {
            let p1 = (c.first.edge, c.first.t.clone());
            let p2 = (c.second.edge, c.second.t.clone());
            out.push(ClassifiedCrossing {
                point: c.point.clone(),
                first: (p1.clone(), self.state_at(&p1)?),
                second: (p2.clone(), self.state_at(&p2)?),
                sign: c.sign,
            });
        }
        Ok(out)
    }

    /// Embeddedness: the two branches at every self-crossing must carry
    /// disjoint labels.
    pub fn check_embedded(&self) -> Result<(), ConfigError> {
        for c in self.classified_self_crossings()? {
            if !labels_disjoint(c.first.1.label, c.second.1.label) {
                return Err(ConfigError::TopologicalObstruction(format!(
                    "not embeddable: self-crossing at ({}, {}) carries states {} and {}",
                    c.point.x, c.point.y, c.first.1, c.second.1
                )));
            }
        }
        Ok(())
    }

    /// Number of tokens traversed positively / negatively.
    pub fn traversal_counts(&self) -> (i64, i64) {
        let pos = self.tokens.iter().filter(|t| t.traversal > 0).count() as i64;
        let neg = self.tokens.len() as i64 - pos;
        (pos, neg)
    }

    /// Maslov number of the longitude class: twice the turning number of
    /// the base loop minus the signed count of traversed configurations.
    pub fn maslov_longitude(&self) -> Result<i64, ConfigError> {
        self.holonomy()?;
        let t = plane::turning_number(&self.loop_)?;
        let (np, nm) = self.traversal_counts();
        Ok(2 * t - np + nm)
    }

    /// Maslov number of the meridian class (always zero for a fibered
    /// Lagrangian: the fiber circle bounds the Lefschetz thimble disc
    /// twice, once with each sign).
    pub fn maslov_meridian(&self) -> i64 {
        0
    }

    /// Surface type of this single piece. A plain closed loop encodes a
    /// torus (orientable holonomy) or a Klein bottle; the spliced
    /// two-carrier loop is a genus-two surface.
    pub fn surface_type(&self) -> Result<SurfaceType, ConfigError> {
        if let BuilderKind::SplicedSR { .. } = self.kind {
            if !self.orientable()? {
                return Err(ConfigError::InvalidConstruction(
                    "spliced carrier must have orientation-preserving holonomy".into(),
                ));
            }
            return Ok(SurfaceType::Orientable { genus: 2 });
        }
        if self.orientable()? {
            Ok(SurfaceType::Orientable { genus: 1 })
        } else {
            Ok(SurfaceType::NonOrientable { cross_caps: 2 })
        }
    }

    /// Count of green self-crossings (same disjoint label pair, equal
    /// orientations). For the standard torus encodings these are exactly
    /// the crossings destroyed by displacing the companion, so this is
    /// the two-dimensional annulus count.
    pub fn green_self_crossings(&self) -> Result<usize, ConfigError> {
        Ok(self
            .classified_self_crossings()?
            .into_iter()
            .filter(|c| c.color() == Some(CrossingColor::Green))
            .count())
    }

    /// Number of tokens (basic configurations) in the word.
    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    /// Reject any use of the `d` cycle (restricted three-cycle chain).
    pub fn check_a3_only(&self) -> Result<(), ConfigError> {
        if self.initial_state.label == Label::D {
            return Err(ConfigError::ForbiddenLabel(
                "initial state uses label d, forbidden under --a3".into(),
            ));
        }
        for tok in &self.tokens {
            if tok.kind.involves_d() {
                return Err(ConfigError::ForbiddenLabel(format!(
                    "token kind {} uses label d, forbidden under --a3",
                    tok.kind.name()
                )));
            }
        }
        Ok(())
    }
}

/// A matching sphere presented by its base path (an open polyline
/// between two base critical values).
#[derive(Debug, Clone)]
pub struct TestSphere {
    pub name: String,
    pub path: Polyline,
}

/// One crossing between a loop and a sphere path, with the transported
/// loop state and planar sign.
#[derive(Debug, Clone)]
pub struct SphereCrossing {
    pub point: Pt,
    pub loop_pos: LoopPos,
    pub state: FiberState,
    pub sign: i8,
}

/// All transverse crossings between a fibered Lagrangian and a matching
/// sphere, with transported states.
pub fn sphere_crossings(
    fl: &FiberedLagrangian,
    sphere: &TestSphere,
) -> Result<Vec<SphereCrossing>, ConfigError> {
    let raw = plane::curve_intersections(&fl.loop_, &sphere.path)?;
    let mut out = Vec::new();
    for c in raw {
        // `first` is the arc on the loop (curve order as passed).
        let pos = (c.first.edge, c.first.t.clone());
        out.push(SphereCrossing {
            point: c.point.clone(),
            loop_pos: pos.clone(),
            state: fl.state_at(&pos)?,
            sign: c.sign,
        });
    }
    Ok(out)
}

/// Signed homology pairing between the Lagrangian's fundamental class
/// and a matching sphere: each transverse base crossing contributes the
/// planar sign times the transported fiber orientation (the fiber circle
/// meets the sphere's vanishing cycle once for every label).
pub fn homology_pairing(
    fl: &FiberedLagrangian,
    sphere: &TestSphere,
) -> Result<i64, ConfigError> {
    let mut total: i64 = 0;
    for c in sphere_crossings(fl, sphere)? {
        total += (c.sign as i64) * (c.state.orient as i64);
    }
    Ok(total)
}

/// Census of the transverse crossings between two decorated loops,
/// classified on a chosen label pair: a crossing whose two transported
/// states carry exactly that (disjoint) pair is green when the fiber
/// orientations agree and blue when they disagree; every other crossing
/// is left unclassified. The pair is the pair of cycles glued by the
/// ambient construction (b/c for the plain tori, b/d for the spliced
/// carrier), and only crossings on those cycles bound candidate annuli.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossCensus {
    pub green: usize,
    pub blue: usize,
    pub unclassified: usize,
}

/// Classify all crossings between two separately-decorated loops.
pub fn cross_census(
    a: &FiberedLagrangian,
    b: &FiberedLagrangian,
    pair: (Label, Label),
) -> Result<CrossCensus, ConfigError> {
    if !labels_disjoint(pair.0, pair.1) {
        return Err(ConfigError::InvalidConstruction(
            "census pair must be a disjoint label pair".into(),
        ));
    }
    let want = (pair.0.min(pair.1), pair.0.max(pair.1));
    let raw = plane::curve_intersections(&a.loop_, &b.loop_)?;
    let mut census = CrossCensus { green: 0, blue: 0, unclassified: 0 };
    for c in raw {
        let sa = a.state_at(&(c.first.edge, c.first.t.clone()))?;
        let sb = b.state_at(&(c.second.edge, c.second.t.clone()))?;
        let got = (sa.label.min(sb.label), sa.label.max(sb.label));
        if got == want {
            if sa.orient == sb.orient {
                census.green += 1;
            } else {
                census.blue += 1;
            }
        } else {
            census.unclassified += 1;
        }
    }
    Ok(census)
}

/// A positive area assignment on the bounded faces of the loop's
/// arrangement realizing a prescribed monotonicity constant.
#[derive(Debug, Clone)]
pub struct AreaAssignment {
    /// `(face index, area)` for every bounded face, all areas positive.
    pub areas: Vec<(usize, BigRational)>,
    /// The achieved signed total (sum of winding-weighted areas).
    pub signed_total: BigRational,
}

/// Solve for positive face areas whose winding-weighted sum equals
/// `kappa * maslov_longitude`. Faces of positive winding receive one
/// common value, negative winding another, zero winding area 1.
pub fn solve_monotone_areas(
    fl: &FiberedLagrangian,
    kappa: &BigRational,
) -> Result<AreaAssignment, ConfigError> {
    if kappa <= &BigRational::zero() {
        return Err(ConfigError::InvalidParams("kappa must be positive".into()));
    }
    let mu = fl.maslov_longitude()?;
    let target = kappa * BigRational::from_integer(BigInt::from(mu));
    let arr = plane::arrangement(&[&fl.loop_])?;
    let mut pos_weight = BigInt::from(0);
    let mut neg_weight = BigInt::from(0);
    let mut faces: Vec<(usize, i64)> = Vec::new();
    for (idx, face) in arr.faces.iter().enumerate() {
        if !face.bounded {
            continue;
        }
        let w = face.winding[0];
        faces.push((idx, w));
        if w > 0 {
            pos_weight += BigInt::from(w);
        } else if w < 0 {
            neg_weight += BigInt::from(-w);
        }
    }
    let p = BigRational::from_integer(pos_weight);
    let n = BigRational::from_integer(neg_weight);
    let one = BigRational::one();
    // positive-winding faces get x, negative get y, zero get 1:
    // x*P - y*N = target with x, y > 0.
    let (x, y) = if p.is_zero() && n.is_zero() {
        if target.is_zero() {
            (one.clone(), one.clone())
        } else {
            return Err(ConfigError::StretchRequired { lobe: "entire loop (no winding faces)".into() });
        }
    } else if n.is_zero() {
        if target > BigRational::zero() {
            (&target / &p, one.clone())
        } else {
            return Err(ConfigError::StretchRequired { lobe: "clockwise coil (no negative-winding face)".into() });
        }
    } else if p.is_zero() {
        if target < BigRational::zero() {
            (one.clone(), -&target / &n)
        } else {
            return Err(ConfigError::StretchRequired { lobe: "counterclockwise coil (no positive-winding face)".into() });
        }
    } else {
        // Both signs present: always solvable.
        let y = if target >= BigRational::zero() {
            one.clone()
        } else {
            (&one - &target) / &n
        };
        let x = (&target + &(&y * &n)) / &p;
        debug_assert!(x > BigRational::zero());
        (x, y)
    };
    let mut areas = Vec::new();
    let mut total = BigRational::zero();
    for (idx, w) in faces {
        let a = if w > 0 {
            x.clone()
        } else if w < 0 {
            y.clone()
        } else {
            one.clone()
        };
        total += BigRational::from_integer(BigInt::from(w)) * &a;
        areas.push((idx, a));
    }
    debug_assert_eq!(total, target);
    Ok(AreaAssignment { areas, signed_total: total })
}

/// Kind of an assembled Lagrangian.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum AssemblyKind {
    /// Linear chain of tori joined by matching-sphere surgeries.
    Lambda { g: usize },
    /// Cyclic chain of `g-1` alternating tori (odd `g`).
    Zeta { g: usize },
    /// Spliced S+R carrier extended by `g-2` torus surgeries.
    Xi { g: usize },
    /// Anything assembled by hand.
    Adhoc,
}

/// A Lagrangian assembled from pieces by Polterovich surgery along
/// matching spheres. Pieces keep their own decorated loops; the marks
/// record the attachments.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub kind: AssemblyKind,
    pub pieces: Vec<FiberedLagrangian>,
    pub matchings: Vec<TestSphere>,
    /// Cyclic chains close up with one extra junction.
    pub cyclic: bool,
}

/// Polterovich sum: each matching sphere joins consecutive pieces and
/// must meet its designated piece transversally in exactly one point.
/// With a single piece and no matchings the sum is the identity.
pub fn polterovich_sum(
    kind: AssemblyKind,
    pieces: Vec<FiberedLagrangian>,
    matchings: Vec<(TestSphere, usize)>,
    cyclic: bool,
) -> Result<Assembly, ConfigError> {
    if pieces.is_empty() {
        return Err(ConfigError::InvalidParams("an assembly needs at least one piece".into()));
    }
    let expected = if pieces.len() == 1 {
        0
    } else if cyclic {
        pieces.len()
    } else {
        pieces.len() - 1
    };
    if matchings.len() != expected {
        return Err(ConfigError::InvalidParams(format!(
            "expected {} matching spheres for {} pieces, got {}",
            expected,
            pieces.len(),
            matchings.len()
        )));
    }
    let mut spheres = Vec::new();
    for (sphere, designated) in matchings {
        let piece = pieces.get(designated).ok_or_else(|| {
            ConfigError::InvalidParams(format!("designated piece {} out of range", designated))
        })?;
        let crossings = plane::curve_intersections(&piece.loop_, &sphere.path)?.len();
        if crossings != 1 {
            return Err(ConfigError::AmbiguousSurgery {
                piece: piece.kind.name(),
                crossings,
            });
        }
        spheres.push(sphere);
    }
    let mut assembly = Assembly { kind, pieces, matchings: spheres, cyclic };
    for (i, _) in assembly.matchings.iter().enumerate() {
        let n = assembly.pieces.len();
        assembly.pieces[i % n].surgery_marks += 1;
        assembly.pieces[(i + 1) % n].surgery_marks += 1;
    }
    Ok(assembly)
}

impl Assembly {
    /// Surgery along matching spheres adds surface genera. Non-orientable
    /// pieces contribute two cross-caps each; in a mixed sum every torus
    /// piece also converts to two cross-caps. Closing a chain into a ring
    /// adds one more handle (the extra junction). The total cross-cap
    /// count of a closed non-orientable Lagrangian must be even.
    pub fn surface_type(&self) -> Result<SurfaceType, ConfigError> {
        let mut genus = 0usize;
        let mut cross_caps = 0usize;
        let mut any_nonorientable = false;
        for p in &self.pieces {
            match p.surface_type()? {
                SurfaceType::Orientable { genus: g } => genus += g,
                SurfaceType::NonOrientable { cross_caps: c } => {
                    any_nonorientable = true;
                    cross_caps += c;
                }
            }
        }
        if self.cyclic && self.pieces.len() > 1 {
            genus += 1;
        }
        if any_nonorientable {
            let total = cross_caps + 2 * genus;
            if total % 2 != 0 {
                return Err(ConfigError::TopologicalObstruction(format!(
                    "assembled surface would be a connected sum of {} projective planes; an \
                     embedded monotone representative needs an even count",
                    total
                )));
            }
            Ok(SurfaceType::NonOrientable { cross_caps: total })
        } else {
            Ok(SurfaceType::Orientable { genus })
        }
    }

    /// Maslov numbers of the distinguished homology classes: the surgery
    /// meridian class (index 2), then for each piece its longitude and
    /// meridian.
    pub fn maslov_vector(&self) -> Result<Vec<i64>, ConfigError> {
        let mut v = vec![2];
        for p in &self.pieces {
            v.push(p.maslov_longitude()?);
            v.push(p.maslov_meridian());
        }
        Ok(v)
    }

    /// Maslov number of the first longitude of a cyclic chain: the class
    /// runs once around the ring (turning contribution 2·2), through one
    /// corner of each piece and one surgery corner per junction, each
    /// positively traversed corner contributing -1.
    pub fn first_longitude_maslov(&self) -> Result<i64, ConfigError> {
        if !self.cyclic {
            return self.pieces[0].maslov_longitude();
        }
        let pieces = self.pieces.len() as i64;
        Ok(4 - 2 * pieces)
    }

    /// Total basic-configuration count across the pieces.
    pub fn token_count(&self) -> usize {
        self.pieces.iter().map(|p| p.token_count()).sum()
    }
}

/// Smallest base degree in which a construction certainly embeds:
/// 4 fiber critical values per basic configuration in general, with the
/// sharper published bounds for the catalogued families.
pub fn min_r(token_count: usize, family: Option<&AssemblyKind>, single: Option<&BuilderKind>) -> i64 {
    if let Some(kind) = single {
        match kind {
            BuilderKind::Torus { .. } | BuilderKind::KleinVariant { .. } => return 18,
            BuilderKind::SplicedSR { .. } => return 80,
            _ => {}
        }
    }
    if let Some(kind) = family {
        match kind {
            AssemblyKind::Lambda { g } => return 18 * (*g as i64),
            AssemblyKind::Zeta { g } => return 18 * (*g as i64 - 1),
            AssemblyKind::Xi { g } => return 243 + 36 * (*g as i64 - 1),
            AssemblyKind::Adhoc => {}
        }
    }
    4 * token_count as i64
}

/// Product-type invariants of an assembled chain: the Maslov vector of
/// the distinguished classes and the divisibility invariant
/// `N = gcd of the per-piece longitude half-degrees`.
pub fn product_invariants(per_piece_lk: &[(i64, i64)]) -> (Vec<i64>, i64) {
    let mut vector = vec![2];
    for (k, l) in per_piece_lk {
        vector.push(2 * (l - k));
        vector.push(0);
    }
    let mut n: i64 = 0;
    for (k, l) in per_piece_lk {
        n = gcd_i64(n, (l - k).abs());
    }
    (vector, n)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i64(b, a % b)
    }
}
