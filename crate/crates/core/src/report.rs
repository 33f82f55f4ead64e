//! Construction files, invariant reports, and family catalogs.
//!
//! This is the serialization layer shared by the command-line tool and
//! the C ABI. A *construction file* embeds the authoritative build
//! recipe (the [`ConstructionSpec`]) together with the geometry it
//! produces, emitted as exact rational coordinates for inspection;
//! parsing re-runs the deterministic builder and refuses a file whose
//! emitted geometry does not match its recipe. An *invariant report*
//! collects the soft invariants, the certified hard invariants, and the
//! supporting certificates for one construction; every refusal of a
//! certificate appears as a structured `not-certified` entry carrying
//! the offending object, never as a silent omission. A *family catalog*
//! tabulates a parameter slice and cross-checks that members sharing
//! their soft invariants are still separated by a hard one.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::builders::{
    build_r_carrier, build_s_carrier, build_torus, lambda_assembly, sphere_suite, splice_sr,
    xi_assembly, zeta_assembly, TorusSpec,
};
use crate::configs::{
    min_r, polterovich_sum, solve_monotone_areas, sphere_crossings, transport, Assembly,
    AssemblyKind, ConfigError, FiberState, FiberedLagrangian, TestSphere, TokenKind,
};
use crate::floer::{hf_tori, hf_with_sphere, CandidateDisc, HfOutcome};
use crate::plane::{q, Polyline, Pt, Q};
use crate::threefold::{
    annulus_count, annulus_count_2d, build_gamma, c3_product_invariants, maslov_3d,
    ThreefoldLagrangian,
};

/// Schema tag of a construction file.
pub const SCHEMA_CONSTRUCTION: &str = "fibered-construction/1";
/// Schema tag of an invariant report.
pub const SCHEMA_REPORT: &str = "invariant-report/1";
/// Schema tag of a family catalog.
pub const SCHEMA_CATALOG: &str = "family-catalog/1";

// ---------------------------------------------------------------------------
// Failures with process exit codes
// ---------------------------------------------------------------------------

/// A failure classified by how the process should report it: schema
/// errors exit 2, geometric degeneracies 3, refused certificates 4, and
/// family discrepancies 5.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Schema(String),
    Geometry(String),
    NotCertified(String),
    Discrepancy(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Schema(_) => 2,
            Failure::Geometry(_) => 3,
            Failure::NotCertified(_) => 4,
            Failure::Discrepancy(_) => 5,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Failure::Schema(_) => "schema",
            Failure::Geometry(_) => "geometry",
            Failure::NotCertified(_) => "not-certified",
            Failure::Discrepancy(_) => "discrepancy",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Schema(m)
            | Failure::Geometry(m)
            | Failure::NotCertified(m)
            | Failure::Discrepancy(m) => m,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label(), self.message())
    }
}

impl std::error::Error for Failure {}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let text = e.to_string();
        match e {
            ConfigError::InvalidParams(_)
            | ConfigError::InvalidConstruction(_)
            | ConfigError::ForbiddenLabel(_)
            | ConfigError::IncompatibleToken { .. } => Failure::Schema(text),
            ConfigError::Geometry(_)
            | ConfigError::StretchRequired { .. }
            | ConfigError::AmbiguousSurgery { .. } => Failure::Geometry(text),
            ConfigError::TopologicalObstruction(_) => Failure::NotCertified(text),
        }
    }
}

// ---------------------------------------------------------------------------
// Exact rational coordinates as strings
// ---------------------------------------------------------------------------

/// Render an exact rational as `"n"` or `"n/d"`.
pub fn q_string(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn pt_strings(p: &Pt) -> [String; 2] {
    [q_string(&p.x), q_string(&p.y)]
}

fn poly_strings(poly: &Polyline) -> Vec<[String; 2]> {
    poly.points().iter().map(pt_strings).collect()
}

// ---------------------------------------------------------------------------
// Construction specs
// ---------------------------------------------------------------------------

fn default_offset() -> (i64, i64) {
    (0, 0)
}

/// The authoritative build recipe for one construction. Everything else
/// in a construction file is derived deterministically from this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstructionSpec {
    /// Monotone torus encoding `T_{k,l,m}`; optional pairing teeth and
    /// an integer translation of the whole picture.
    Torus {
        k: i64,
        l: i64,
        m: i64,
        #[serde(default)]
        teeth: i64,
        #[serde(default = "default_offset")]
        offset: (i64, i64),
    },
    /// Klein variant `K_{k,l,m}^±` (`variant` is `+1` or `-1`).
    Klein { k: i64, l: i64, m: i64, variant: i8 },
    /// Extended carrier `R_{k,l,m}` through three coils.
    RCarrier { k: i64, l: i64, m: i64 },
    /// Extended carrier `S_{n,p,q}` on the third cycle.
    SCarrier { n: i64, p: i64, q: i64 },
    /// Spliced genus-two carrier `SR_{k1,l1}`.
    Splice { k1: i64, l1: i64 },
    /// Linear chain of `g` plain tori.
    Lambda { g: usize },
    /// Cyclic chain of `g - 1` plain tori (odd `g`).
    Zeta { g: usize },
    /// Spliced carrier extended by torus surgeries to genus `g`.
    Xi { g: usize, k1: i64, l1: i64 },
    /// Product Lagrangian over the frozen base curve `gamma_{2n}`,
    /// carrying the genus-`g` extended fiber piece in ambient base
    /// degree `r`; `displaced` records the parallel partner used by the
    /// annulus count.
    Gamma {
        n: i64,
        g: usize,
        k1: i64,
        l1: i64,
        r: i64,
        #[serde(default)]
        displaced: bool,
    },
}

/// A realized construction: a single decorated loop, a surgered chain
/// of them, or a product Lagrangian over a decorated base curve.
#[derive(Debug, Clone)]
pub enum Construction {
    Single(FiberedLagrangian),
    Chain(Assembly),
    Product(ThreefoldLagrangian),
}

impl ConstructionSpec {
    /// Human-readable name of the construction.
    pub fn name(&self) -> String {
        match self {
            ConstructionSpec::Torus { k, l, m, teeth, .. } => {
                let base = format!("T_{{{},{},{}}}", k, l, m);
                if *teeth > 0 {
                    format!("{} with {} teeth", base, teeth)
                } else {
                    base
                }
            }
            ConstructionSpec::Klein { k, l, m, variant } => {
                format!("K_{{{},{},{}}}{}", k, l, m, if *variant > 0 { "+" } else { "-" })
            }
            ConstructionSpec::RCarrier { k, l, m } => format!("R_{{{},{},{}}}", k, l, m),
            ConstructionSpec::SCarrier { n, p, q } => format!("S_{{{},{},{}}}", n, p, q),
            ConstructionSpec::Splice { k1, l1 } => format!("SR_{{{},{}}}", k1, l1),
            ConstructionSpec::Lambda { g } => format!("Lambda_{}", g),
            ConstructionSpec::Zeta { g } => format!("Zeta_{}", g),
            ConstructionSpec::Xi { g, k1, l1 } => format!("Xi_{}[{},{}]", g, k1, l1),
            ConstructionSpec::Gamma { n, g, k1, l1, .. } => {
                format!("gamma_{} x Xi_{}[{},{}]", 2 * n, g, k1, l1)
            }
        }
    }

    /// Run the deterministic builder for this recipe.
    pub fn realize(&self) -> Result<Construction, ConfigError> {
        match self {
            ConstructionSpec::Torus { k, l, m, teeth, offset } => Ok(Construction::Single(
                build_torus(TorusSpec::new(*k, *l, *m).with_teeth(*teeth).at(offset.0, offset.1))?,
            )),
            ConstructionSpec::Klein { k, l, m, variant } => Ok(Construction::Single(build_torus(
                TorusSpec::new(*k, *l, *m).with_klein(*variant),
            )?)),
            ConstructionSpec::RCarrier { k, l, m } => {
                Ok(Construction::Single(build_r_carrier(*k, *l, *m, (0, 0))?))
            }
            ConstructionSpec::SCarrier { n, p, q } => {
                Ok(Construction::Single(build_s_carrier(*n, *p, *q, (0, 0))?))
            }
            ConstructionSpec::Splice { k1, l1 } => Ok(Construction::Single(splice_sr(*k1, *l1)?)),
            ConstructionSpec::Lambda { g } => Ok(Construction::Chain(lambda_assembly(*g)?)),
            ConstructionSpec::Zeta { g } => Ok(Construction::Chain(zeta_assembly(*g)?)),
            ConstructionSpec::Xi { g, k1, l1 } => {
                Ok(Construction::Chain(xi_assembly(*g, *k1, *l1)?))
            }
            ConstructionSpec::Gamma { n, g, k1, l1, r, displaced } => {
                let fiber = xi_assembly(*g, *k1, *l1)?;
                let mut t3 = build_gamma(*n, &fiber, *r)?;
                if *displaced {
                    t3 = t3.with_displaced_pair();
                }
                Ok(Construction::Product(t3))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Construction files
// ---------------------------------------------------------------------------

/// One token of a decorated loop, with its exact position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenDump {
    pub kind: TokenKind,
    pub traversal: i8,
    pub edge: usize,
    pub t: String,
}

/// One decorated loop: its exact vertices, basepoint state, and token
/// word in loop order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceDump {
    pub name: String,
    pub initial: FiberState,
    pub points: Vec<[String; 2]>,
    pub tokens: Vec<TokenDump>,
}

/// One matching path joining consecutive pieces of a chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeckDump {
    pub name: String,
    pub points: Vec<[String; 2]>,
}

/// One rotation cluster crossed by a product-base curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDump {
    pub repeats: i64,
    pub edge: usize,
    pub t: String,
}

/// The geometry a recipe produces, emitted for inspection and checked
/// on re-parse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryDump {
    pub pieces: Vec<PieceDump>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub necks: Vec<NeckDump>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<BlockDump>,
}

/// A complete construction file: the recipe, the name, the smallest
/// certified ambient base degree, and the emitted geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionFile {
    pub schema: String,
    pub name: String,
    pub spec: ConstructionSpec,
    /// Smallest base degree in which the construction certainly embeds.
    pub capacity_r: i64,
    pub geometry: GeometryDump,
}

fn piece_dump(fl: &FiberedLagrangian) -> PieceDump {
    PieceDump {
        name: fl.kind.name(),
        initial: fl.initial_state,
        points: poly_strings(&fl.loop_),
        tokens: fl
            .tokens
            .iter()
            .map(|tok| TokenDump {
                kind: tok.kind,
                traversal: tok.traversal,
                edge: tok.edge,
                t: q_string(&tok.t),
            })
            .collect(),
    }
}

fn neck_dump(sphere: &TestSphere) -> NeckDump {
    NeckDump { name: sphere.name.clone(), points: poly_strings(&sphere.path) }
}

fn dump_geometry(c: &Construction) -> GeometryDump {
    match c {
        Construction::Single(fl) => GeometryDump {
            pieces: vec![piece_dump(fl)],
            necks: Vec::new(),
            base: Vec::new(),
            blocks: Vec::new(),
        },
        Construction::Chain(a) => GeometryDump {
            pieces: a.pieces.iter().map(piece_dump).collect(),
            necks: a.matchings.iter().map(neck_dump).collect(),
            base: Vec::new(),
            blocks: Vec::new(),
        },
        Construction::Product(t3) => GeometryDump {
            pieces: t3.fiber_piece.pieces.iter().map(piece_dump).collect(),
            necks: t3.fiber_piece.matchings.iter().map(neck_dump).collect(),
            base: poly_strings(&t3.base3),
            blocks: t3
                .blocks
                .iter()
                .map(|b| BlockDump {
                    repeats: b.repeats,
                    edge: b.placement.0,
                    t: q_string(&b.placement.1),
                })
                .collect(),
        },
    }
}

fn capacity_of(c: &Construction) -> i64 {
    match c {
        Construction::Single(fl) => min_r(fl.token_count(), None, Some(&fl.kind)),
        Construction::Chain(a) => min_r(a.token_count(), Some(&a.kind), None),
        Construction::Product(t3) => {
            min_r(t3.fiber_piece.token_count(), Some(&t3.fiber_piece.kind), None)
        }
    }
}

/// Realize a recipe and package it as a construction file.
pub fn build_construction(spec: &ConstructionSpec) -> Result<(ConstructionFile, Construction), Failure> {
    let c = spec.realize()?;
    let file = ConstructionFile {
        schema: SCHEMA_CONSTRUCTION.to_string(),
        name: spec.name(),
        spec: spec.clone(),
        capacity_r: capacity_of(&c),
        geometry: dump_geometry(&c),
    };
    Ok((file, c))
}

/// Serialize any report-layer value as pretty JSON with a trailing
/// newline. Field order follows the struct declarations, so the bytes
/// are deterministic.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

/// Parse a construction file, re-run its recipe, and verify the emitted
/// geometry matches; a file whose geometry disagrees with its recipe is
/// rejected as corrupted.
pub fn parse_construction(text: &str) -> Result<(ConstructionFile, Construction), Failure> {
    let file: ConstructionFile = serde_json::from_str(text)
        .map_err(|e| Failure::Schema(format!("construction file does not parse: {}", e)))?;
    if file.schema != SCHEMA_CONSTRUCTION {
        return Err(Failure::Schema(format!(
            "unsupported schema {:?} (expected {:?})",
            file.schema, SCHEMA_CONSTRUCTION
        )));
    }
    let (rebuilt, c) = build_construction(&file.spec)?;
    if rebuilt != file {
        return Err(Failure::Schema(format!(
            "file contents do not match the recipe {}: the builder is deterministic, so the \
             file was edited or corrupted",
            file.spec.name()
        )));
    }
    Ok((file, c))
}

/// Accept either a bare recipe or a full construction file.
pub fn load_construction(text: &str) -> Result<(ConstructionSpec, Construction), Failure> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Failure::Schema(format!("input is not JSON: {}", e)))?;
    if value.get("schema").is_some() {
        let (file, c) = parse_construction(text)?;
        Ok((file.spec, c))
    } else {
        let spec: ConstructionSpec = serde_json::from_value(value)
            .map_err(|e| Failure::Schema(format!("recipe does not parse: {}", e)))?;
        let c = spec.realize()?;
        Ok((spec, c))
    }
}

// ---------------------------------------------------------------------------
// Invariant reports
// ---------------------------------------------------------------------------

/// Signed homology pairing against one probe sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingEntry {
    pub sphere: String,
    pub crossings: usize,
    pub pairing: i64,
}

/// Feasibility of a positive area assignment realizing monotonicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneNote {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounded_faces: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signed_total: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<String>,
}

/// Soft (classical-topology) invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftInvariants {
    /// Maslov numbers of the distinguished homology classes: for a
    /// single loop `(longitude, meridian)`, for a chain the assembled
    /// vector, for a product the fiber piece's vector.
    pub maslov_vector: Vec<i64>,
    pub surface: String,
    pub orientable: bool,
    pub token_count: usize,
    /// Smallest base degree in which the construction certainly embeds.
    pub min_r: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology_pairings: Option<Vec<PairingEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone: Option<MonotoneNote>,
}

/// One candidate disc examined by the rank certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscEntry {
    pub from: [String; 2],
    pub to: [String; 2],
    pub loop_dir: i8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub turning: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
}

fn disc_entry(d: &CandidateDisc) -> DiscEntry {
    DiscEntry {
        from: pt_strings(&d.from),
        to: pt_strings(&d.to),
        loop_dir: d.loop_dir,
        turning: d.turning,
        index: d.index,
    }
}

/// Outcome of the rank computation against one probe sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HfEntry {
    pub sphere: String,
    pub crossings: usize,
    /// `"certified"` or `"not-certified"`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// The candidate disc that defeated the certificate, when refused.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<DiscEntry>,
}

/// Pairing ranks under rank-one local systems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSystemEntry {
    pub generators: usize,
    pub rank_generic: usize,
    pub rank_at_1: usize,
    pub rank_at_minus_1: usize,
    pub rank_at_2: usize,
}

/// Rigid annulus tallies for a construction with a displaced partner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusEntry {
    /// Self-crossings of the base curve (1 for the flat displaced pair).
    pub base_crossings: usize,
    pub count: i64,
    pub matched: i64,
    pub opposed: i64,
}

/// Product-type invariants of a linear chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub maslov_vector: Vec<i64>,
    /// `gcd` of the per-piece longitude half-degrees (0 when balanced).
    pub displacement_gcd: i64,
}

/// Hard (pseudoholomorphic) invariants; absent entries did not apply to
/// the construction kind, refused entries are marked, never dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardInvariants {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hf: Vec<HfEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_system: Option<LocalSystemEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annuli: Option<AnnulusEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maslov_3d: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<ProductEntry>,
}

/// The fiber states of one piece's holonomy walk, one state per arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyTrace {
    pub piece: String,
    /// `states[0]` is the basepoint state; each token appends the state
    /// after passing it.
    pub states: Vec<String>,
    pub closes: bool,
}

/// All candidate discs examined against one probe sphere, including the
/// rejected ones (those without an index could not bound a disc).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereCandidates {
    pub sphere: String,
    pub discs: Vec<DiscEntry>,
}

/// Certificates backing the hard invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    pub holonomy: Vec<HolonomyTrace>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidate_discs: Vec<SphereCandidates>,
}

/// Complete invariant report for one construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub schema: String,
    pub construction: String,
    /// Active reductions (`"a3"`, `"seed-free"`), empty when none.
    pub flags: Vec<String>,
    pub soft: SoftInvariants,
    pub hard: HardInvariants,
    pub certificates: Certificates,
}

fn holonomy_trace(fl: &FiberedLagrangian) -> Result<HolonomyTrace, ConfigError> {
    let mut states = vec![fl.initial_state.to_string()];
    let mut s = fl.initial_state;
    for (i, tok) in fl.tokens.iter().enumerate() {
        s = transport(s, tok.kind, i)?;
        states.push(s.to_string());
    }
    Ok(HolonomyTrace {
        piece: fl.kind.name(),
        states,
        closes: s.label == fl.initial_state.label,
    })
}

fn orientable_of(surface: &crate::configs::SurfaceType) -> bool {
    matches!(surface, crate::configs::SurfaceType::Orientable { .. })
}

fn monotone_note(fl: &FiberedLagrangian) -> MonotoneNote {
    let kappa = BigRational::from_integer(BigInt::from(1));
    match solve_monotone_areas(fl, &kappa) {
        Ok(assignment) => MonotoneNote {
            feasible: true,
            bounded_faces: Some(assignment.areas.len()),
            signed_total: Some(q_string(&assignment.signed_total)),
            obstruction: None,
        },
        Err(e) => MonotoneNote {
            feasible: false,
            bounded_faces: None,
            signed_total: None,
            obstruction: Some(e.to_string()),
        },
    }
}

/// The standard probe suite, translated to the construction's frame.
fn shifted_suite(offset: (i64, i64)) -> Vec<TestSphere> {
    let suite = sphere_suite();
    let identity = [[q(1), q(0)], [q(0), q(1)]];
    let shift = Pt::ints(offset.0, offset.1);
    [suite.s1, suite.sh, suite.s2, suite.s3]
        .into_iter()
        .map(|s| TestSphere { name: s.name.clone(), path: s.path.transformed(&identity, &shift) })
        .collect()
}

fn hf_section(
    fl: &FiberedLagrangian,
    probes: &[TestSphere],
) -> Result<(Vec<HfEntry>, Vec<SphereCandidates>), ConfigError> {
    let mut entries = Vec::new();
    let mut certificates = Vec::new();
    for sphere in probes {
        let crossings = sphere_crossings(fl, sphere)?.len();
        match hf_with_sphere(fl, sphere)? {
            HfOutcome::Certified { rank, candidates } => {
                entries.push(HfEntry {
                    sphere: sphere.name.clone(),
                    crossings,
                    status: "certified".to_string(),
                    rank: Some(rank),
                    offending: None,
                });
                certificates.push(SphereCandidates {
                    sphere: sphere.name.clone(),
                    discs: candidates.iter().map(disc_entry).collect(),
                });
            }
            HfOutcome::Inconclusive { offending } => {
                let disc = disc_entry(&offending);
                entries.push(HfEntry {
                    sphere: sphere.name.clone(),
                    crossings,
                    status: "not-certified".to_string(),
                    rank: None,
                    offending: Some(disc.clone()),
                });
                certificates.push(SphereCandidates {
                    sphere: sphere.name.clone(),
                    discs: vec![disc],
                });
            }
        }
    }
    Ok((entries, certificates))
}

/// Compute the full invariant report for a realized construction.
pub fn invariant_report(
    spec: &ConstructionSpec,
    c: &Construction,
    flags: &[String],
) -> Result<InvariantReport, Failure> {
    let mut report = InvariantReport {
        schema: SCHEMA_REPORT.to_string(),
        construction: spec.name(),
        flags: flags.to_vec(),
        soft: SoftInvariants {
            maslov_vector: Vec::new(),
            surface: String::new(),
            orientable: true,
            token_count: 0,
            min_r: capacity_of(c),
            homology_pairings: None,
            monotone: None,
        },
        hard: HardInvariants {
            hf: Vec::new(),
            local_system: None,
            annuli: None,
            maslov_3d: None,
            product: None,
        },
        certificates: Certificates { holonomy: Vec::new(), candidate_discs: Vec::new() },
    };

    match c {
        Construction::Single(fl) => {
            report.soft.maslov_vector = vec![fl.maslov_longitude()?, fl.maslov_meridian()];
            let surface = fl.surface_type()?;
            report.soft.orientable = orientable_of(&surface);
            report.soft.surface = surface.to_string();
            report.soft.token_count = fl.token_count();
            report.soft.monotone = Some(monotone_note(fl));
            report.certificates.holonomy.push(holonomy_trace(fl)?);

            // The probe suite sits in the standard torus frame, so the
            // pairing and rank tables apply to the torus-style loops.
            if let ConstructionSpec::Torus { k, l, m, teeth, offset } = spec {
                let probes = shifted_suite(*offset);
                let mut pairings = Vec::new();
                for sphere in &probes {
                    let crossings = sphere_crossings(fl, sphere)?;
                    let pairing =
                        crossings.iter().map(|x| x.sign as i64 * x.state.orient as i64).sum();
                    pairings.push(PairingEntry {
                        sphere: sphere.name.clone(),
                        crossings: crossings.len(),
                        pairing,
                    });
                }
                report.soft.homology_pairings = Some(pairings);
                if *teeth == 0 {
                    // Rank probes use the closed suite members (the flat
                    // segment only pairs homologically).
                    let rank_probes: Vec<TestSphere> = probes
                        .iter()
                        .filter(|s| s.name != "SH")
                        .map(|s| TestSphere { name: s.name.clone(), path: s.path.clone() })
                        .collect();
                    let (entries, certs) = hf_section(fl, &rank_probes)?;
                    report.hard.hf = entries;
                    report.certificates.candidate_discs = certs;
                    let displaced = build_torus(
                        TorusSpec::new(*k, *l, *m).at(offset.0 + 500, offset.1),
                    )?;
                    let greens = annulus_count_2d(fl, &displaced)?;
                    report.hard.annuli = Some(AnnulusEntry {
                        base_crossings: 1,
                        count: greens as i64,
                        matched: greens as i64,
                        opposed: (fl.classified_self_crossings()?
                            .iter()
                            .filter(|x| {
                                x.color() == Some(crate::configs::CrossingColor::Blue)
                            })
                            .count()) as i64,
                    });
                } else {
                    report.hard.local_system =
                        Some(local_system_entry(*k, *l, *m, *teeth)?);
                }
            }
        }
        Construction::Chain(a) => {
            report.soft.maslov_vector = a.maslov_vector()?;
            let surface = a.surface_type()?;
            report.soft.orientable = orientable_of(&surface);
            report.soft.surface = surface.to_string();
            report.soft.token_count = a.token_count();
            for piece in &a.pieces {
                report.certificates.holonomy.push(holonomy_trace(piece)?);
            }
            if matches!(a.kind, AssemblyKind::Lambda { .. }) {
                let (vector, n) = c3_product_invariants(a)?;
                report.hard.product =
                    Some(ProductEntry { maslov_vector: vector, displacement_gcd: n });
            }
        }
        Construction::Product(t3) => {
            report.soft.maslov_vector = t3.fiber_piece.maslov_vector()?;
            let surface = t3.fiber_piece.surface_type()?;
            report.soft.orientable = orientable_of(&surface);
            report.soft.surface = format!("circle times {}", surface);
            report.soft.token_count = t3.fiber_piece.token_count();
            for piece in &t3.fiber_piece.pieces {
                report.certificates.holonomy.push(holonomy_trace(piece)?);
            }
            report.hard.maslov_3d = Some(maslov_3d(t3)?);
            if t3.displaced_pair {
                let annuli = annulus_count(t3)?;
                report.hard.annuli = Some(AnnulusEntry {
                    base_crossings: annuli.h,
                    count: annuli.count,
                    matched: annuli.matched,
                    opposed: annuli.opposed,
                });
            }
        }
    }
    Ok(report)
}

fn local_system_entry(k: i64, l: i64, m: i64, teeth: i64) -> Result<LocalSystemEntry, ConfigError> {
    let pairing = hf_tori(k, l, m, teeth)?;
    let at = |n: i64| BigRational::from_integer(BigInt::from(n));
    Ok(LocalSystemEntry {
        generators: pairing.generators(),
        rank_generic: pairing.hf_rank_generic(),
        rank_at_1: pairing.hf_rank_at(&at(1)),
        rank_at_minus_1: pairing.hf_rank_at(&at(-1)),
        rank_at_2: pairing.hf_rank_at(&at(2)),
    })
}

/// `true` when some hard entry was refused.
pub fn has_refusal(report: &InvariantReport) -> bool {
    report.hard.hf.iter().any(|e| e.status != "certified")
}

/// Enforce the restricted three-cycle reduction: no piece may use the
/// fourth cycle.
pub fn enforce_a3(c: &Construction) -> Result<(), Failure> {
    let pieces: Vec<&FiberedLagrangian> = match c {
        Construction::Single(fl) => vec![fl],
        Construction::Chain(a) => a.pieces.iter().collect(),
        Construction::Product(t3) => t3.fiber_piece.pieces.iter().collect(),
    };
    for piece in pieces {
        piece.check_a3_only()?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Family catalogs
// ---------------------------------------------------------------------------

/// The shared soft invariants of a family slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftKey {
    pub maslov_vector: Vec<i64>,
    pub surface: String,
    pub pairings: Vec<i64>,
}

/// One member of a family catalog: its soft key and the hard value that
/// separates it from its siblings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub soft: SoftKey,
    /// Which hard invariant separates the slice.
    pub separator: String,
    pub value: i64,
}

/// A family slice with its distinctness cross-check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCatalog {
    pub schema: String,
    pub family: String,
    pub entries: Vec<CatalogEntry>,
    /// `true` when the separating values are pairwise distinct.
    pub distinct: bool,
    /// Violations of the family's claims (shared soft invariants,
    /// pairwise distinct hard values); empty on a clean slice.
    pub discrepancies: Vec<String>,
}

fn finish_catalog(family: String, entries: Vec<CatalogEntry>) -> FamilyCatalog {
    let mut discrepancies = Vec::new();
    if let Some(first) = entries.first() {
        for e in &entries[1..] {
            if e.soft != first.soft {
                discrepancies.push(format!(
                    "{} and {} should share soft invariants but differ",
                    first.name, e.name
                ));
            }
        }
    }
    let mut distinct = true;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            if entries[i].value == entries[j].value {
                distinct = false;
                discrepancies.push(format!(
                    "{} and {} are not separated: both have {} = {}",
                    entries[i].name, entries[j].name, entries[i].separator, entries[i].value
                ));
            }
        }
    }
    FamilyCatalog {
        schema: SCHEMA_CATALOG.to_string(),
        family,
        entries,
        distinct,
        discrepancies,
    }
}

/// Catalog the slice `T_{k,k+c,m}` for `0 <= k <= k_max`: all members
/// share their soft invariants, while the certified rank against the
/// second probe sphere (`2k + 1`) separates them.
pub fn t_slice_catalog(c: i64, k_max: i64, m: i64) -> Result<FamilyCatalog, Failure> {
    let family = format!("T_{{k,k+{},{}}} for 0 <= k <= {}", c, m, k_max);
    let mut entries = Vec::new();
    for k in 0..=k_max.max(-1) {
        let spec = ConstructionSpec::Torus { k, l: k + c, m, teeth: 0, offset: (0, 0) };
        let realized = spec.realize()?;
        let fl = match &realized {
            Construction::Single(fl) => fl,
            _ => unreachable!("a torus recipe realizes to a single loop"),
        };
        let suite = shifted_suite((0, 0));
        let mut pairings = Vec::new();
        for sphere in &suite {
            let mut pairing = 0i64;
            for x in sphere_crossings(fl, sphere)? {
                pairing += x.sign as i64 * x.state.orient as i64;
            }
            pairings.push(pairing);
        }
        let s2 = suite.iter().find(|s| s.name == "S2").expect("suite has S2");
        let rank = match hf_with_sphere(fl, s2)? {
            HfOutcome::Certified { rank, .. } => rank,
            HfOutcome::Inconclusive { offending } => {
                return Err(Failure::NotCertified(format!(
                    "rank of {} against S2 is not certified: candidate disc between ({}, {}) \
                     and ({}, {}) has index {:?}",
                    spec.name(),
                    offending.from.x,
                    offending.from.y,
                    offending.to.x,
                    offending.to.y,
                    offending.index
                )));
            }
        };
        entries.push(CatalogEntry {
            name: spec.name(),
            soft: SoftKey {
                maslov_vector: vec![fl.maslov_longitude()?, fl.maslov_meridian()],
                surface: fl.surface_type()?.to_string(),
                pairings,
            },
            separator: "rank against S2".to_string(),
            value: rank as i64,
        });
    }
    Ok(finish_catalog(family, entries))
}

/// Build a linear chain with prescribed per-piece coil parameters, each
/// piece a torus `T_{k_i,l_i,0}` stacked at height `400 i` and joined
/// by vertical matching paths.
pub fn lambda_chain(pairs: &[(i64, i64)]) -> Result<Assembly, ConfigError> {
    if pairs.is_empty() {
        return Err(ConfigError::InvalidParams("a chain needs at least one piece".into()));
    }
    let mut pieces = Vec::new();
    for (i, (k, l)) in pairs.iter().enumerate() {
        pieces.push(build_torus(TorusSpec::new(*k, *l, 0).at(0, 400 * i as i64))?);
    }
    let mut matchings = Vec::new();
    for i in 0..pairs.len() - 1 {
        let dy = 400 * i as i64;
        let path = Polyline::open(vec![Pt::ints(70, 30 + dy), Pt::ints(70, 340 + dy)])?;
        matchings.push((TestSphere { name: format!("neck-{}", i), path }, i));
    }
    polterovich_sum(AssemblyKind::Lambda { g: pairs.len() }, pieces, matchings, false)
}

/// Catalog linear chains by their displacement gcd `N`: chains listed
/// together are distinguished exactly when their `N` values differ.
pub fn lambda_gcd_catalog(chains: &[Vec<(i64, i64)>]) -> Result<FamilyCatalog, Failure> {
    let mut entries = Vec::new();
    for pairs in chains {
        let assembly = lambda_chain(pairs)?;
        let (vector, n) = c3_product_invariants(&assembly)?;
        let name = format!(
            "Lambda_{}[{}]",
            pairs.len(),
            pairs.iter().map(|(k, l)| format!("{}:{}", k, l)).collect::<Vec<_>>().join(",")
        );
        entries.push(CatalogEntry {
            name,
            soft: SoftKey {
                maslov_vector: vector,
                surface: assembly.surface_type()?.to_string(),
                pairings: Vec::new(),
            },
            separator: "displacement gcd".to_string(),
            value: n,
        });
    }
    // Chains in one sweep differ in their soft keys on purpose (the
    // Maslov vectors vary); only the separating values are checked.
    let mut discrepancies = Vec::new();
    let mut distinct = true;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            if entries[i].value == entries[j].value {
                distinct = false;
                discrepancies.push(format!(
                    "{} and {} are not separated: both have {} = {}",
                    entries[i].name, entries[j].name, entries[i].separator, entries[i].value
                ));
            }
        }
    }
    Ok(FamilyCatalog {
        schema: SCHEMA_CATALOG.to_string(),
        family: "linear chains by displacement gcd".to_string(),
        entries,
        distinct,
        discrepancies,
    })
}

// ---------------------------------------------------------------------------
// Plain-text rendering
// ---------------------------------------------------------------------------

/// Render a construction file as a terse human-readable summary.
pub fn construction_text(file: &ConstructionFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("construction {}\n", file.name));
    out.push_str(&format!("  embeds in base degree r >= {}\n", file.capacity_r));
    for piece in &file.geometry.pieces {
        out.push_str(&format!(
            "  piece {}: {} vertices, {} tokens, basepoint {:?}\n",
            piece.name,
            piece.points.len(),
            piece.tokens.len(),
            format!("({},{})", piece.initial.label.letter(), if piece.initial.orient > 0 { "+" } else { "-" }),
        ));
    }
    for neck in &file.geometry.necks {
        out.push_str(&format!("  matching path {}: {} vertices\n", neck.name, neck.points.len()));
    }
    if !file.geometry.base.is_empty() {
        out.push_str(&format!(
            "  base curve: {} vertices, {} rotation blocks\n",
            file.geometry.base.len(),
            file.geometry.blocks.len()
        ));
    }
    out
}

/// Render an invariant report as aligned plain text.
pub fn report_text(report: &InvariantReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("invariants of {}\n", report.construction));
    if !report.flags.is_empty() {
        out.push_str(&format!("  flags: {}\n", report.flags.join(", ")));
    }
    let s = &report.soft;
    out.push_str(&format!(
        "  maslov vector: ({})\n",
        s.maslov_vector.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
    ));
    out.push_str(&format!("  surface: {}\n", s.surface));
    out.push_str(&format!("  tokens: {}\n", s.token_count));
    out.push_str(&format!("  embeds in base degree r >= {}\n", s.min_r));
    if let Some(pairings) = &s.homology_pairings {
        for p in pairings {
            out.push_str(&format!(
                "  pairing with {}: {} ({} crossings)\n",
                p.sphere, p.pairing, p.crossings
            ));
        }
    }
    if let Some(m) = &s.monotone {
        if m.feasible {
            out.push_str(&format!(
                "  monotone areas: feasible on {} bounded faces, signed total {}\n",
                m.bounded_faces.unwrap_or(0),
                m.signed_total.as_deref().unwrap_or("0"),
            ));
        } else {
            out.push_str(&format!(
                "  monotone areas: infeasible ({})\n",
                m.obstruction.as_deref().unwrap_or("unknown"),
            ));
        }
    }
    for e in &report.hard.hf {
        match e.rank {
            Some(rank) => out.push_str(&format!(
                "  rank against {}: {} (certified, {} crossings)\n",
                e.sphere, rank, e.crossings
            )),
            None => out.push_str(&format!(
                "  rank against {}: not certified ({} crossings)\n",
                e.sphere, e.crossings
            )),
        }
    }
    if let Some(ls) = &report.hard.local_system {
        out.push_str(&format!(
            "  local systems: {} generators, generic rank {}, rank {} at +1, {} at -1, {} at 2\n",
            ls.generators, ls.rank_generic, ls.rank_at_1, ls.rank_at_minus_1, ls.rank_at_2
        ));
    }
    if let Some(a) = &report.hard.annuli {
        out.push_str(&format!(
            "  rigid annuli: {} ({} matched, {} opposed crossings, {} base crossings)\n",
            a.count, a.matched, a.opposed, a.base_crossings
        ));
    }
    if let Some(m3) = report.hard.maslov_3d {
        out.push_str(&format!("  product maslov number: {}\n", m3));
    }
    if let Some(p) = &report.hard.product {
        out.push_str(&format!(
            "  product vector: ({}), displacement gcd {}\n",
            p.maslov_vector.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "),
            p.displacement_gcd
        ));
    }
    for h in &report.certificates.holonomy {
        out.push_str(&format!(
            "  holonomy of {}: {} ({})\n",
            h.piece,
            h.states.join(" -> "),
            if h.closes { "closes" } else { "does not close" }
        ));
    }
    out
}

/// Render a family catalog as aligned plain text.
pub fn catalog_text(catalog: &FamilyCatalog) -> String {
    let mut out = String::new();
    out.push_str(&format!("family {}\n", catalog.family));
    for e in &catalog.entries {
        out.push_str(&format!(
            "  {}: maslov ({}), {}, {} = {}\n",
            e.name,
            e.soft.maslov_vector.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "),
            e.soft.surface,
            e.separator,
            e.value
        ));
    }
    out.push_str(&format!(
        "  separated: {}\n",
        if catalog.entries.is_empty() {
            "vacuously".to_string()
        } else if catalog.distinct {
            "yes".to_string()
        } else {
            "NO".to_string()
        }
    ));
    for d in &catalog.discrepancies {
        out.push_str(&format!("  discrepancy: {}\n", d));
    }
    out
}
