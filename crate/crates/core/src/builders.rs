//! Constructors for the catalogued families of decorated loops: coiled
//! torus and Klein-bottle encodings, the two extended carriers, their
//! splice, the census overlay ring, toothed pairing companions, and the
//! surgery assemblies.
//!
//! All geometry is exact and rectilinear. Every builder returns a fully
//! validated [`FiberedLagrangian`] (closed holonomy, embeddedness checked
//! at every self-crossing) or a [`ConfigError`] naming the obstruction.

use num_traits::Zero;

use crate::configs::{
    polterovich_sum, Assembly, AssemblyKind, BuilderKind, ConfigError, FiberState,
    FiberedLagrangian, Label, PlacedToken, TestSphere, TokenKind,
};
use crate::plane::{q, qr, Polyline, Pt, Q};

/// Vertex path plus token sites, before normalization.
#[derive(Debug, Clone, Default)]
struct PathSpec {
    pts: Vec<Pt>,
    sites: Vec<(Pt, TokenKind, i8)>,
}

impl PathSpec {
    fn to(&mut self, x: Q, y: Q) {
        self.pts.push(Pt::new(x, y));
    }

    fn toi(&mut self, x: i64, y: i64) {
        self.pts.push(Pt::ints(x, y));
    }

    fn site(&mut self, x: Q, y: Q, kind: TokenKind, traversal: i8) {
        self.sites.push((Pt::new(x, y), kind, traversal));
    }

    fn sitei(&mut self, x: i64, y: i64, kind: TokenKind, traversal: i8) {
        self.site(q(x), q(y), kind, traversal);
    }

    fn translated(self, dx: i64, dy: i64) -> PathSpec {
        if dx == 0 && dy == 0 {
            return self;
        }
        let (dx, dy) = (q(dx), q(dy));
        let shift = |p: &Pt| Pt::new(&p.x + &dx, &p.y + &dy);
        PathSpec {
            pts: self.pts.iter().map(&shift).collect(),
            sites: self.sites.iter().map(|(p, k, t)| (shift(p), *k, *t)).collect(),
        }
    }
}

/// Find the unique edge of `loop_` whose interior contains `p`.
fn locate_on(loop_: &Polyline, p: &Pt) -> Result<(usize, Q), ConfigError> {
    let mut found: Option<(usize, Q)> = None;
    for i in 0..loop_.n_edges() {
        let (a, b) = loop_.edge(i);
        let dx = &b.x - &a.x;
        let dy = &b.y - &a.y;
        let px = &p.x - &a.x;
        let py = &p.y - &a.y;
        if !(&dx * &py - &dy * &px).is_zero() {
            continue;
        }
        let num = &px * &dx + &py * &dy;
        let den = &dx * &dx + &dy * &dy;
        if num <= Q::zero() || num >= den {
            continue;
        }
        if let Some((first_edge, _)) = &found {
            return Err(ConfigError::InvalidConstruction(format!(
                "token site ({}, {}) lies on edges {} and {} of the loop",
                p.x, p.y, first_edge, i
            )));
        }
        found = Some((i, num / den));
    }
    found.ok_or_else(|| {
        ConfigError::InvalidConstruction(format!(
            "token site ({}, {}) is not in the interior of any edge",
            p.x, p.y
        ))
    })
}

fn assemble(
    kind: BuilderKind,
    spec: PathSpec,
    initial: FiberState,
) -> Result<FiberedLagrangian, ConfigError> {
    let loop_ = Polyline::closed(spec.pts)?;
    let mut tokens = Vec::with_capacity(spec.sites.len());
    for (p, kind_, traversal) in &spec.sites {
        let (edge, t) = locate_on(&loop_, p)?;
        tokens.push(PlacedToken { kind: *kind_, traversal: *traversal, edge, t });
    }
    FiberedLagrangian::new(kind, loop_, tokens, initial)
}

fn check_range(name: &str, v: i64, max: i64) -> Result<(), ConfigError> {
    if v < 0 || v > max {
        return Err(ConfigError::InvalidParams(format!(
            "{} must lie in 0..={}, got {}",
            name, max, v
        )));
    }
    Ok(())
}

/// Parameters for the coiled torus and Klein-bottle encodings.
///
/// The loop winds `m` times through an expanding outer coil, `k` times
/// through a clockwise inner coil and `l` times through a counter-
/// clockwise right coil; its longitude has Maslov number `2(l-k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusSpec {
    pub k: i64,
    pub l: i64,
    pub m: i64,
    /// `0` encodes the torus; `+1` inserts an extra reflect configuration
    /// and `-1` removes one, giving the two Klein-bottle variants with
    /// longitude Maslov numbers `2(l-k) - 1` and `2(l-k) + 1`.
    pub klein: i8,
    /// Number of pairing teeth raised from the return corridor.
    pub teeth: i64,
    /// Integer translation applied to the whole picture.
    pub offset: (i64, i64),
}

impl TorusSpec {
    pub fn new(k: i64, l: i64, m: i64) -> Self {
        TorusSpec { k, l, m, klein: 0, teeth: 0, offset: (0, 0) }
    }

    pub fn with_klein(mut self, variant: i8) -> Self {
        self.klein = variant;
        self
    }

    pub fn with_teeth(mut self, teeth: i64) -> Self {
        self.teeth = teeth;
        self
    }

    pub fn at(mut self, dx: i64, dy: i64) -> Self {
        self.offset = (dx, dy);
        self
    }
}

fn torus_path(spec: &TorusSpec) -> PathSpec {
    let TorusSpec { k, l, m, klein, teeth, .. } = *spec;
    let mut path = PathSpec::default();
    path.toi(40, -30);
    // Outer coil: counterclockwise, contracting by 2 per wrap, one
    // reflect configuration on the north and one on the south side.
    for j in 0..m {
        let r = 40 - 2 * j;
        path.toi(r, r);
        path.sitei(-2, r, TokenKind::BB, 1);
        path.toi(-r, r);
        path.toi(-r, -r);
        path.sitei(2, -r, TokenKind::BB, 1);
        path.toi(r - 2, -r);
    }
    // Transition into the inner coil.
    path.toi(40 - 2 * m, 20);
    path.toi(-14, 20);
    path.toi(-14, 12);
    // Inner coil: clockwise, contracting by 1/2 per wrap, a positively
    // and a negatively traversed reflect configuration on each north
    // side. The removing Klein variant omits the last positive one.
    for j in 0..k {
        let s = qr(24 - j, 2);
        if !(klein == -1 && j == k - 1) {
            path.site(q(-2), s.clone(), TokenKind::BB, 1);
        }
        path.site(q(2), s.clone(), TokenKind::BB, -1);
        path.to(s.clone(), s.clone());
        path.to(s.clone(), -s.clone());
        path.to(-s.clone(), -s.clone());
        path.to(-s, qr(24 - (j + 1), 2));
    }
    let s_k = qr(24 - k, 2);
    if klein == 1 {
        path.site(q(-5), s_k.clone(), TokenKind::BB, 1);
    }
    path.to(qr(1, 4), s_k);
    path.to(qr(1, 4), q(0));
    // West lane, swapping into the companion cycle, then the long way
    // south and east under everything.
    path.sitei(0, 0, TokenKind::BC, 1);
    path.toi(-60, 0);
    path.toi(-60, -50);
    path.toi(100, -50);
    path.sitei(100, 0, TokenKind::BC, 1);
    // Right coil: counterclockwise, expanding by 1/2 per wrap.
    for i in 0..l {
        let v = qr(20 + i, 2);
        let x_in = if i == 0 { q(100) } else { q(100) + qr(20 + i - 1, 2) };
        path.to(x_in, v.clone());
        path.site(q(98), v.clone(), TokenKind::BB, 1);
        path.to(q(100) - v.clone(), v.clone());
        path.to(q(100) - v.clone(), -v.clone());
        path.site(q(102), -v.clone(), TokenKind::BB, -1);
        path.to(q(100) + v.clone(), -v);
    }
    let x_exit = if l == 0 { q(100) } else { q(100) + qr(20 + l - 1, 2) };
    path.to(x_exit, q(50));
    // Pairing teeth raised from the return corridor, placed east to
    // west; each carries one positive and one negative reflect
    // configuration, so it changes neither turning nor the Maslov class.
    for i in (0..teeth).rev() {
        let xe = 52 + 4 * i;
        let xw = 50 + 4 * i;
        path.toi(xe, 50);
        path.toi(xe, 235);
        path.sitei(xe, 215, TokenKind::BB, 1);
        path.sitei(xe - 1, 235, TokenKind::BB, -1);
        path.toi(xw, 235);
        path.toi(xw, 50);
    }
    path.toi(41, 50);
    path.toi(41, -30);
    path
}

/// Build a coiled torus (or Klein-bottle variant) encoding.
pub fn build_torus(spec: TorusSpec) -> Result<FiberedLagrangian, ConfigError> {
    check_range("k", spec.k, 12)?;
    check_range("l", spec.l, 12)?;
    check_range("m", spec.m, 9)?;
    check_range("teeth", spec.teeth, 12)?;
    if !matches!(spec.klein, -1 | 0 | 1) {
        return Err(ConfigError::InvalidParams(
            "klein variant must be -1, 0 or +1".into(),
        ));
    }
    if spec.klein == -1 && spec.k == 0 {
        return Err(ConfigError::InvalidParams(
            "the removing Klein variant needs at least one inner wrap (k >= 1)".into(),
        ));
    }
    let kind = if spec.klein == 0 {
        BuilderKind::Torus { k: spec.k, l: spec.l, m: spec.m }
    } else {
        BuilderKind::KleinVariant { k: spec.k, l: spec.l, m: spec.m, extra: spec.klein }
    };
    assemble(
        kind,
        torus_path(&spec).translated(spec.offset.0, spec.offset.1),
        FiberState::new(Label::B, 1),
    )
}

/// The standard matching spheres probing the torus encodings (origin
/// placement).
pub struct SphereSuite {
    /// Low western probe; meets the coils in `m + 2k + 1` points.
    pub s1: TestSphere,
    /// Westward horizontal probe; homology pairing `+m`.
    pub sh: TestSphere,
    /// Hooked probe through the inner coil; `2k + 1` points, pairing `+1`.
    pub s2: TestSphere,
    /// Vertical probe through the right coil; `2l` points, pairing `0`.
    pub s3: TestSphere,
}

fn probe(name: &str, pts: Vec<Pt>) -> TestSphere {
    TestSphere {
        name: name.to_string(),
        path: Polyline::open(pts).expect("probe paths are fixed and valid"),
    }
}

pub fn sphere_suite() -> SphereSuite {
    SphereSuite {
        s1: probe(
            "S1",
            vec![Pt::new(q(-50), qr(1, 2)), Pt::ints(-50, -2), Pt::ints(20, -2)],
        ),
        sh: probe("SH", vec![Pt::ints(20, -1), Pt::ints(-50, -1)]),
        s2: probe(
            "S2",
            vec![Pt::ints(-20, 5), Pt::ints(-20, -15), Pt::ints(4, -15), Pt::ints(4, 15)],
        ),
        s3: probe("S3", vec![Pt::ints(94, 20), Pt::ints(94, -20)]),
    }
}

/// A toothed loop together with a plain companion raised 180 units, so
/// that the teeth cross the companion's return corridor. The toothed
/// loop compensates the teeth with extra inner and right wraps, keeping
/// both longitudes at the same Maslov number.
pub fn toothed_pair(
    k: i64,
    l: i64,
    m: i64,
    teeth: i64,
) -> Result<(FiberedLagrangian, FiberedLagrangian), ConfigError> {
    if teeth < 1 {
        return Err(ConfigError::InvalidParams(
            "a toothed pair needs at least one tooth".into(),
        ));
    }
    let toothed = build_torus(TorusSpec::new(k + teeth, l + teeth, m).with_teeth(teeth))?;
    let plain = build_torus(TorusSpec::new(k, l, m).at(0, 180))?;
    Ok((toothed, plain))
}

fn r_path(k: i64, l: i64, m: i64) -> PathSpec {
    let mut path = PathSpec::default();
    path.to(q(30), qr(101, 2));
    path.toi(30, 20);
    path.toi(-14, 20);
    path.toi(-14, 12);
    // Inner coil: same clockwise reflect-pair coil as the torus.
    for j in 0..k {
        let s = qr(24 - j, 2);
        path.site(q(-2), s.clone(), TokenKind::BB, 1);
        path.site(q(2), s.clone(), TokenKind::BB, -1);
        path.to(s.clone(), s.clone());
        path.to(s.clone(), -s.clone());
        path.to(-s.clone(), -s.clone());
        path.to(-s, qr(24 - (j + 1), 2));
    }
    path.to(qr(1, 4), qr(24 - k, 2));
    path.to(qr(1, 4), q(0));
    path.sitei(0, 0, TokenKind::BC, 1);
    path.toi(-60, 0);
    path.toi(-60, -50);
    path.toi(180, -50);
    path.to(q(180), qr(41, 2));
    path.to(q(136), qr(41, 2));
    path.to(q(136), qr(25, 2));
    // Middle coil: clockwise around (150, 1/2), swap pairs on each north
    // side briefly carrying the third cycle.
    for j in 0..l {
        let b = qr(24 - j, 2);
        let yn = qr(25 - j, 2);
        let ys = qr(j - 23, 2);
        path.site(q(148), yn.clone(), TokenKind::CD, 1);
        path.site(q(152), yn.clone(), TokenKind::CD, -1);
        path.to(q(150) + b.clone(), yn);
        path.to(q(150) + b.clone(), ys.clone());
        path.to(q(150) - b.clone(), ys);
        path.to(q(150) - b, qr(25 - (j + 1), 2));
    }
    path.to(qr(601, 4), qr(25 - l, 2));
    path.to(qr(601, 4), qr(1, 2));
    // Long westward exit on the third cycle, then south and east under
    // everything to the right coil.
    path.site(q(150), qr(1, 2), TokenKind::CD, 1);
    path.to(q(-70), qr(1, 2));
    path.toi(-70, -54);
    path.toi(300, -54);
    path.sitei(300, 0, TokenKind::CD, 1);
    // Right coil: counterclockwise around (300, 0) with reflect pairs on
    // the companion cycle.
    for i in 0..m {
        let w = qr(20 + i, 2);
        let x_in = if i == 0 { q(300) } else { q(300) + qr(20 + i - 1, 2) };
        path.to(x_in, w.clone());
        path.site(q(298), w.clone(), TokenKind::CC, 1);
        path.to(q(300) - w.clone(), w.clone());
        path.to(q(300) - w.clone(), -w.clone());
        path.site(q(302), -w.clone(), TokenKind::CC, -1);
        path.to(q(300) + w.clone(), -w);
    }
    let x_exit = if m == 0 { q(300) } else { q(300) + qr(20 + m - 1, 2) };
    path.to(x_exit, qr(101, 2));
    path.site(q(200), qr(101, 2), TokenKind::BC, 1);
    path
}

/// Extended carrier winding through three coils on three different
/// cycles; its longitude has Maslov number `2(m - k - l)`.
pub fn build_r_carrier(
    k: i64,
    l: i64,
    m: i64,
    offset: (i64, i64),
) -> Result<FiberedLagrangian, ConfigError> {
    check_range("k", k, 12)?;
    check_range("l", l, 12)?;
    check_range("m", m, 12)?;
    assemble(
        BuilderKind::RCarrier { k, l, m },
        r_path(k, l, m).translated(offset.0, offset.1),
        FiberState::new(Label::B, 1),
    )
}

fn s_path(n: i64, p: i64, q_out: i64) -> PathSpec {
    let mut path = PathSpec::default();
    path.toi(30, 55);
    path.toi(30, 20);
    path.toi(14, 20);
    path.toi(14, 12);
    // First coil: counterclockwise (mirrored), two positive swap
    // configurations on each north side.
    for j in 0..n {
        let s = qr(24 - j, 2);
        path.site(q(2), s.clone(), TokenKind::BD, 1);
        path.site(q(-2), s.clone(), TokenKind::BD, 1);
        path.to(-s.clone(), s.clone());
        path.to(-s.clone(), -s.clone());
        path.to(s.clone(), -s.clone());
        path.to(s, qr(24 - (j + 1), 2));
    }
    path.to(qr(-1, 4), qr(24 - n, 2));
    path.to(qr(-1, 4), q(0));
    path.sitei(0, 0, TokenKind::CD, 1);
    // Eastward exit across the first coil, then over the top to the
    // second coil.
    path.toi(75, 0);
    path.toi(75, 45);
    path.toi(180, 45);
    path.toi(180, 20);
    path.toi(136, 20);
    path.toi(136, 12);
    // Second coil: clockwise around (150, 0) with swap pairs.
    for j in 0..p {
        let b = qr(24 - j, 2);
        path.site(q(148), b.clone(), TokenKind::CD, 1);
        path.site(q(152), b.clone(), TokenKind::CD, -1);
        path.to(q(150) + b.clone(), b.clone());
        path.to(q(150) + b.clone(), -b.clone());
        path.to(q(150) - b.clone(), -b.clone());
        path.to(q(150) - b, qr(24 - (j + 1), 2));
    }
    path.to(qr(601, 4), qr(24 - p, 2));
    path.to(qr(601, 4), qr(-1, 4));
    // Westward exit just below the first coil's lane, then south and
    // east under everything.
    path.site(q(150), qr(-1, 4), TokenKind::BC, 1);
    path.to(q(-70), qr(-1, 4));
    path.toi(-70, -60);
    path.toi(300, -60);
    path.sitei(300, 0, TokenKind::BC, 1);
    // Third coil: counterclockwise around (300, 0); both swap
    // configurations sit west of the entry ascent so the souths carry
    // the companion cycle across it.
    for i in 0..q_out {
        let w = qr(20 + i, 2);
        let x_in = if i == 0 { q(300) } else { q(300) + qr(20 + i - 1, 2) };
        path.to(x_in, w.clone());
        path.site(q(298), w.clone(), TokenKind::BC, 1);
        path.to(q(300) - w.clone(), w.clone());
        path.to(q(300) - w.clone(), -w.clone());
        path.site(q(298), -w.clone(), TokenKind::BC, -1);
        path.to(q(300) + w.clone(), -w);
    }
    let x_exit = if q_out == 0 { q(300) } else { q(300) + qr(20 + q_out - 1, 2) };
    path.to(x_exit, q(55));
    path.sitei(100, 55, TokenKind::CD, 1);
    path
}

/// Extended carrier on the third cycle; its longitude has Maslov number
/// `2(q - p - 1)`.
pub fn build_s_carrier(
    n: i64,
    p: i64,
    q_out: i64,
    offset: (i64, i64),
) -> Result<FiberedLagrangian, ConfigError> {
    check_range("n", n, 12)?;
    check_range("p", p, 12)?;
    check_range("q", q_out, 12)?;
    assemble(
        BuilderKind::SCarrier { n, p, q: q_out },
        s_path(n, p, q_out).translated(offset.0, offset.1),
        FiberState::new(Label::D, 1),
    )
}

/// Embedded decorated ring threaded through a carrier for the annulus
/// census: its fingers pass through the carrier's inner coil and over
/// the middle coil, and its word closes orientably on the third cycle.
pub fn census_ring(k1: i64, offset: (i64, i64)) -> Result<FiberedLagrangian, ConfigError> {
    check_range("k1", k1, 12)?;
    // Height at which the inner finger stops: between the two innermost
    // wrap radii of a `k1`-wrap coil (above the whole coil when empty).
    let stop = if k1 >= 1 { qr(49 - 2 * k1, 4) } else { qr(25, 2) };
    let mut path = PathSpec::default();
    path.toi(-50, -290);
    path.toi(-50, -2);
    path.to(qr(-1, 2), q(-2));
    path.site(qr(-1, 2), q(1), TokenKind::DD, 1);
    path.to(qr(-1, 2), stop.clone());
    path.to(q(4), stop);
    path.toi(4, 15);
    path.sitei(100, 15, TokenKind::BD, 1);
    path.toi(149, 15);
    path.toi(149, 2);
    path.toi(153, 2);
    path.toi(153, 15);
    path.toi(260, 15);
    path.sitei(260, 10, TokenKind::BD, 1);
    path.sitei(260, -100, TokenKind::DD, 1);
    path.toi(260, -290);
    assemble(
        BuilderKind::Custom("census-ring".into()),
        path.translated(offset.0, offset.1),
        FiberState::new(Label::D, 1),
    )
}

/// Carrier-plus-ring pair whose mutual crossings, classified on the
/// `{b, d}` pair, form the annulus census: `k1` green and `k1 + l1 + 1`
/// blue crossings.
pub fn census_overlay(
    k1: i64,
    l1: i64,
) -> Result<(FiberedLagrangian, FiberedLagrangian), ConfigError> {
    let carrier = build_r_carrier(k1, l1, 1, (0, 0))?;
    let ring = census_ring(k1, (0, 0))?;
    Ok((carrier, ring))
}

/// Splice of the two extended carriers into a single loop of genus two:
/// both are cut on an arc carrying the same state and rejoined by two
/// crossing-free connectors. The wrap counts are balanced so the spliced
/// longitude has Maslov number zero.
pub fn splice_sr(k1: i64, l1: i64) -> Result<FiberedLagrangian, ConfigError> {
    check_range("k1", k1, 12)?;
    check_range("l1", l1, 12)?;
    let m = k1 + l1 + 1;
    if m > 12 {
        return Err(ConfigError::InvalidParams(
            "spliced carrier needs k1 + l1 <= 11".into(),
        ));
    }
    let s = s_path(0, 0, 1);
    let r = r_path(k1, l1, m).translated(0, 400);
    // Cut the first carrier's south corridor between x = 99 and x = 101.
    let corridor_start = Pt::ints(-70, -60);
    let i_cut = s
        .pts
        .iter()
        .position(|p| *p == corridor_start)
        .expect("the carrier path contains its south corridor");
    debug_assert_eq!(s.pts[i_cut + 1], Pt::ints(300, -60));
    // The second carrier is cut on its return corridor west of the final
    // swap configuration; both cut arcs carry the same state.
    let mut pts: Vec<Pt> = Vec::new();
    pts.extend_from_slice(&s.pts[..=i_cut]);
    pts.push(Pt::ints(99, -60));
    pts.push(Pt::ints(99, -64));
    pts.push(Pt::ints(400, -64));
    pts.push(Pt::ints(400, 480));
    pts.push(Pt::ints(59, 480));
    pts.push(Pt::new(q(59), qr(901, 2)));
    pts.extend(r.pts.iter().cloned());
    pts.push(Pt::new(q(61), qr(901, 2)));
    pts.push(Pt::ints(61, 474));
    pts.push(Pt::ints(396, 474));
    pts.push(Pt::ints(396, -62));
    pts.push(Pt::ints(101, -62));
    pts.push(Pt::ints(101, -60));
    pts.extend_from_slice(&s.pts[i_cut + 1..]);
    let mut sites = s.sites;
    sites.extend(r.sites);
    assemble(
        BuilderKind::SplicedSR { k1, l1 },
        PathSpec { pts, sites },
        FiberState::new(Label::D, 1),
    )
}

fn vertical_probe(name: String, x: i64, y0: i64, y1: i64) -> TestSphere {
    TestSphere {
        name,
        path: Polyline::open(vec![Pt::ints(x, y0), Pt::ints(x, y1)])
            .expect("probe paths are fixed and valid"),
    }
}

/// Linear chain of `g` plain tori joined by matching-sphere surgeries:
/// an orientable genus-`g` Lagrangian.
pub fn lambda_assembly(g: usize) -> Result<Assembly, ConfigError> {
    if !(1..=12).contains(&g) {
        return Err(ConfigError::InvalidParams(
            "linear chain needs 1 <= g <= 12".into(),
        ));
    }
    let mut pieces = Vec::new();
    for i in 0..g {
        pieces.push(build_torus(TorusSpec::new(0, 0, 0).at(0, 400 * i as i64))?);
    }
    let mut matchings = Vec::new();
    for i in 0..g - 1 {
        let dy = 400 * i as i64;
        matchings.push((vertical_probe(format!("neck-{}", i), 70, 30 + dy, 340 + dy), i));
    }
    polterovich_sum(AssemblyKind::Lambda { g }, pieces, matchings, false)
}

/// Cyclic chain of `g - 1` plain tori (odd `g >= 3`): closing the ring
/// adds one handle, giving genus `g`.
pub fn zeta_assembly(g: usize) -> Result<Assembly, ConfigError> {
    if g < 3 || g % 2 == 0 || g > 13 {
        return Err(ConfigError::InvalidParams(
            "cyclic chain needs odd g with 3 <= g <= 13".into(),
        ));
    }
    let n = g - 1;
    let mut pieces = Vec::new();
    for i in 0..n {
        pieces.push(build_torus(TorusSpec::new(0, 0, 0).at(0, 400 * i as i64))?);
    }
    let mut matchings = Vec::new();
    for i in 0..n {
        let dy = 400 * i as i64;
        matchings.push((vertical_probe(format!("neck-{}", i), 70, 30 + dy, 340 + dy), i));
    }
    polterovich_sum(AssemblyKind::Zeta { g }, pieces, matchings, true)
}

/// Spliced two-carrier loop extended by `g - 2` torus surgeries into an
/// orientable genus-`g` Lagrangian (`g >= 2`).
pub fn xi_assembly(g: usize, k1: i64, l1: i64) -> Result<Assembly, ConfigError> {
    if !(2..=12).contains(&g) {
        return Err(ConfigError::InvalidParams(
            "extended spliced chain needs 2 <= g <= 12".into(),
        ));
    }
    let mut pieces = vec![splice_sr(k1, l1)?];
    for j in 0..g - 2 {
        pieces.push(build_torus(TorusSpec::new(0, 0, 0).at(0, 600 + 400 * j as i64))?);
    }
    let mut matchings = Vec::new();
    for j in 0..g - 2 {
        let dy = 400 * j as i64;
        matchings.push((
            vertical_probe(format!("neck-{}", j), 70, 580 + dy, 940 + dy),
            j + 1,
        ));
    }
    polterovich_sum(AssemblyKind::Xi { g }, pieces, matchings, false)
}
