//! The 3-dimensional layer: product Lagrangians fibered over immersed
//! base curves that carry rotation-block decorations.
//!
//! A surface piece in the fiber is parallel-transported around an
//! immersed loop in the product base. Crossing a rotation block twists
//! the fiber by a power of the fractional boundary rotation, recorded
//! symbolically as a signed repeat count of the distinguished
//! vanishing-cycle list `V_1 … V_{4(r'-1)}` (expanding it would mean
//! hundreds of twists; the Maslov formula needs only the total). The
//! module computes the 3d Maslov number, the rigid-annulus counts of a
//! displaced pair, the one-crossing rank reduction to the planar
//! theory, and the product Maslov vector with its divisibility
//! invariant.

use crate::builders::census_overlay;
use crate::configs::{
    cross_census, min_r, product_invariants, Assembly, AssemblyKind, BuilderKind, ConfigError,
    CrossingColor, FiberedLagrangian, Label, TestSphere,
};
use crate::floer::{hf_with_sphere, HfOutcome};
use crate::plane::{self, turning_number, Polyline, Pt, Q};

/// A cluster of critical values whose monodromy is a signed number of
/// repeats of the distinguished vanishing-cycle list, placed at an arc
/// position `(edge, parameter)` on the 3d base loop.
#[derive(Debug, Clone)]
pub struct RotationBlock {
    /// Signed repeats of the full list; one full base rotation is
    /// `rotation_unit` repeats.
    pub repeats: i64,
    pub placement: (usize, Q),
}

/// Repeat exponent of the first rotation symplectomorphism for the
/// genus-`g` fiber piece (the list is repeated `3 * eta(g)` times).
pub fn eta(g: i64) -> i64 {
    27 + 6 * (g - 1)
}

/// Repeat exponent of the complementary rotation: together the two make
/// one full turn, `3 * (eta + eta_tilde) = rotation unit`.
pub fn eta_tilde(g: i64) -> i64 {
    54 + 6 * (g - 1)
}

/// A product Lagrangian: `fiber_piece` transported around `base3`.
#[derive(Debug, Clone)]
pub struct ThreefoldLagrangian {
    /// Immersed loop in the product-base plane.
    pub base3: Polyline,
    /// Rotation clusters crossed by the loop.
    pub blocks: Vec<RotationBlock>,
    /// The surface carried in the fiber.
    pub fiber_piece: Assembly,
    /// Repeats per full base rotation (`3 * (eta + eta_tilde)` for the
    /// genus-`g` fiber piece); irrelevant when there are no blocks.
    pub rotation_unit: i64,
    /// Ambient base degree the construction was certified against.
    pub ambient_r: i64,
    /// Whether the displaced partner of the annulus setup is recorded.
    pub displaced_pair: bool,
    /// Index `n` when built from the frozen curve family `gamma_{2n}`.
    pub family_index: Option<i64>,
}

impl ThreefoldLagrangian {
    /// Record the combinatorially displaced partner (a parallel pushoff
    /// of the circle factor); only the crossing bookkeeping feeds the
    /// annulus counts, so the partner is a flag, not a second geometry.
    pub fn with_displaced_pair(mut self) -> Self {
        self.displaced_pair = true;
        self
    }
}

fn ints(pairs: &[(i64, i64)]) -> Vec<Pt> {
    pairs.iter().map(|&(x, y)| Pt::ints(x, y)).collect()
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

/// Base curve of `gamma_0`: a figure-eight (turning number zero, one
/// self-crossing) whose two lobes enclose opposite rotation clusters.
fn figure_eight() -> Polyline {
    Polyline::closed(ints(&[(0, 0), (10, 0), (10, 6), (-4, 6), (-4, 12), (4, 12)]))
        .expect("the frozen figure-eight base is a valid closed loop")
}

/// Base curve of `gamma_2` and `gamma_4`: an embedded rectangle
/// (turning number one).
fn rectangle() -> Polyline {
    Polyline::closed(ints(&[(0, 0), (30, 0), (30, 20), (0, 20)]))
        .expect("the frozen rectangle base is a valid closed loop")
}

/// Base curve of `gamma_6` through `gamma_10`: an octagonal curl with
/// one self-crossing and turning number two.
fn curl() -> Polyline {
    Polyline::closed(ints(&[
        (0, -10),
        (25, -10),
        (25, 18),
        (-14, 18),
        (-14, -2),
        (12, -2),
        (12, 8),
        (-4, 8),
    ]))
    .expect("the frozen curl base is a valid closed loop")
}

/// Build the product Lagrangian over the frozen curve `gamma_{2n}`
/// (indexed so that its Maslov number is `2n`), carrying the extended
/// spliced fiber piece. `r` is the ambient base degree; it must be at
/// least the piece's capacity.
pub fn build_gamma(n: i64, xi: &Assembly, r: i64) -> Result<ThreefoldLagrangian, ConfigError> {
    let g = match xi.kind {
        AssemblyKind::Xi { g } => g as i64,
        _ => {
            return Err(ConfigError::InvalidConstruction(
                "the 3d product needs the extended spliced fiber piece".into(),
            ))
        }
    };
    if !(0..=5).contains(&n) {
        return Err(ConfigError::InvalidParams(
            "the frozen base-curve family covers 0 <= n <= 5".into(),
        ));
    }
    let capacity = min_r(0, Some(&xi.kind), None);
    if r < capacity {
        return Err(ConfigError::InvalidParams(format!(
            "ambient base degree {} is below the capacity {} of the fiber piece",
            r, capacity
        )));
    }
    let unit = 3 * (eta(g) + eta_tilde(g));
    let a = 3 * eta(g);
    let b = 3 * eta_tilde(g);
    // Winding and cluster pattern of the family: the base turns w times
    // and the blocks add n - w full rotations.
    let (base3, repeats): (Polyline, Vec<i64>) = match n {
        0 => (figure_eight(), vec![b, -b]),
        1 => (rectangle(), vec![]),
        2 => (rectangle(), vec![a, b]),
        3 => (curl(), vec![a, b]),
        4 => (curl(), vec![a, b, a, b]),
        // The last cluster groups one extra full rotation.
        5 => (curl(), vec![a, b, a, b + unit]),
        _ => unreachable!(),
    };
    let placements: Vec<(usize, Q)> = match n {
        // The figure-eight blocks sit one per lobe.
        0 => vec![(1, half()), (3, half())],
        _ => (0..repeats.len()).map(|i| (i, half())).collect(),
    };
    let blocks = repeats
        .into_iter()
        .zip(placements)
        .map(|(repeats, placement)| RotationBlock { repeats, placement })
        .collect();
    Ok(ThreefoldLagrangian {
        base3,
        blocks,
        fiber_piece: xi.clone(),
        rotation_unit: unit,
        ambient_r: r,
        displaced_pair: false,
        family_index: Some(n),
    })
}

/// Maslov number of the lift of the base loop: twice its turning number
/// plus twice the accumulated full rotations of the blocks. Errors when
/// the blocks do not close up to whole rotations.
pub fn maslov_3d(t3: &ThreefoldLagrangian) -> Result<i64, ConfigError> {
    let total: i64 = t3.blocks.iter().map(|blk| blk.repeats).sum();
    let twists = if total == 0 {
        0
    } else {
        if t3.rotation_unit <= 0 {
            return Err(ConfigError::InvalidConstruction(
                "rotation blocks need a positive rotation unit".into(),
            ));
        }
        if total % t3.rotation_unit != 0 {
            return Err(ConfigError::InvalidConstruction(format!(
                "rotation blocks do not close: {} repeats is not a multiple of {}",
                total, t3.rotation_unit
            )));
        }
        total / t3.rotation_unit
    };
    Ok(2 * turning_number(&t3.base3)? + 2 * twists)
}

/// Rigid-annulus count of a displaced pair, with the census of the
/// same-cycle crossings behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnulusCount {
    /// Transverse self-intersections of the base loop.
    pub h: usize,
    /// Coil parameters of the spliced fiber carrier.
    pub k1: i64,
    pub l1: i64,
    /// The count of rigid annuli: `h * k1`.
    pub count: i64,
    /// Same-cycle crossings whose boundary orientations match
    /// (one annulus through each): `h * k1`.
    pub matched: i64,
    /// Same-cycle crossings with opposed orientations (no annulus):
    /// `h * (k1 + l1 + 1)`.
    pub opposed: i64,
}

/// Count the rigid annuli between the product Lagrangian and its
/// displaced partner. Each self-crossing of the base loop overlays the
/// carrier images once; the per-crossing census is recomputed from the
/// overlay construction, not read off a formula.
pub fn annulus_count(t3: &ThreefoldLagrangian) -> Result<AnnulusCount, ConfigError> {
    if !t3.displaced_pair {
        return Err(ConfigError::InvalidConstruction(
            "the annulus setup needs the displaced partner recorded".into(),
        ));
    }
    let (k1, l1) = match t3.fiber_piece.pieces.first().map(|p| &p.kind) {
        Some(&BuilderKind::SplicedSR { k1, l1 }) => (k1, l1),
        _ => {
            return Err(ConfigError::InvalidConstruction(
                "the annulus census needs the spliced carrier as the first fiber piece".into(),
            ))
        }
    };
    let h = plane::self_intersections(&t3.base3)?.len();
    let (carrier, ring) = census_overlay(k1, l1)?;
    let census = cross_census(&carrier, &ring, (Label::B, Label::D))?;
    let h64 = h as i64;
    Ok(AnnulusCount {
        h,
        k1,
        l1,
        count: h64 * census.green as i64,
        matched: h64 * census.green as i64,
        opposed: h64 * census.blue as i64,
    })
}

/// One-dimension-lower version of the annulus count: a decorated loop
/// and a displaced parallel copy of it. Annuli sit over the loop's
/// self-crossings whose two transported states agree, i.e. the green
/// ones.
pub fn annulus_count_2d(
    l: &FiberedLagrangian,
    lp: &FiberedLagrangian,
) -> Result<usize, ConfigError> {
    let a = l.loop_.points();
    let b = lp.loop_.points();
    let parallel = a.len() == b.len() && {
        let dx = &b[0].x - &a[0].x;
        let dy = &b[0].y - &a[0].y;
        a.iter()
            .zip(b.iter())
            .all(|(p, q)| &q.x - &p.x == dx && &q.y - &p.y == dy)
    };
    if !parallel {
        return Err(ConfigError::InvalidConstruction(
            "the 2d annulus setup needs a displaced parallel copy of the loop".into(),
        ));
    }
    let greens = l
        .classified_self_crossings()?
        .iter()
        .filter(|c| c.color() == Some(CrossingColor::Green))
        .count();
    Ok(greens)
}

/// Rank of the product Lagrangian against a matching-path sphere whose
/// projection meets the base loop transversally at most once: disjoint
/// projections pair trivially, and a single crossing reduces the
/// computation to the planar rank of the designated fiber piece against
/// the induced fiber sphere.
pub fn hf_3d(
    t3: &ThreefoldLagrangian,
    sphere3: &TestSphere,
    piece: usize,
    fiber_sphere: &TestSphere,
) -> Result<HfOutcome, ConfigError> {
    let crossings = plane::curve_intersections(&t3.base3, &sphere3.path)?.len();
    match crossings {
        0 => Ok(HfOutcome::Certified { rank: 0, candidates: Vec::new() }),
        1 => {
            let fl = t3.fiber_piece.pieces.get(piece).ok_or_else(|| {
                ConfigError::InvalidParams(format!("fiber piece {} out of range", piece))
            })?;
            hf_with_sphere(fl, fiber_sphere)
        }
        n => Err(ConfigError::TopologicalObstruction(format!(
            "matching path {} meets the base loop {} times; the rank reduction needs at most one",
            sphere3.name, n
        ))),
    }
}

/// Maslov vector and divisibility invariant of a product over a chain
/// of tori: `(2, 2(l_1-k_1), 0, …, 2(l_g-k_g), 0)` and the gcd of the
/// half-degrees (zero when every piece is balanced).
pub fn c3_product_invariants(lambda: &Assembly) -> Result<(Vec<i64>, i64), ConfigError> {
    if !matches!(lambda.kind, AssemblyKind::Lambda { .. }) {
        return Err(ConfigError::InvalidConstruction(
            "the product invariants read a linear chain of tori".into(),
        ));
    }
    let mut per_piece = Vec::new();
    for p in &lambda.pieces {
        match p.kind {
            BuilderKind::Torus { k, l, .. } => per_piece.push((k, l)),
            _ => {
                return Err(ConfigError::InvalidConstruction(
                    "every chain piece must be a torus encoding".into(),
                ))
            }
        }
    }
    Ok(product_invariants(&per_piece))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_torus, sphere_suite, xi_assembly, TorusSpec};
    use crate::configs::polterovich_sum;

    fn probe(name: &str, pts: &[(i64, i64)]) -> TestSphere {
        TestSphere {
            name: name.into(),
            path: Polyline::open(ints(pts)).expect("test probes are valid"),
        }
    }

    #[test]
    fn rotation_exponents_make_one_full_turn() {
        for g in 2..=12 {
            let unit = 3 * (eta(g) + eta_tilde(g));
            assert_eq!(unit, min_r(0, Some(&AssemblyKind::Xi { g: g as usize }), None));
        }
    }

    #[test]
    fn gamma_family_maslov_is_twice_the_index() {
        let xi2 = xi_assembly(2, 1, 1).unwrap();
        let xi3 = xi_assembly(3, 2, 0).unwrap();
        for xi in [&xi2, &xi3] {
            for n in 0..=5 {
                let t3 = build_gamma(n, xi, 400).unwrap();
                assert_eq!(maslov_3d(&t3).unwrap(), 2 * n, "gamma_{}", 2 * n);
            }
        }
        // Pinned windings: the n = 3 curve turns twice, the larger
        // curves keep turning n only through their blocks.
        let w: Vec<i64> = (0..=5)
            .map(|n| turning_number(&build_gamma(n, &xi2, 400).unwrap().base3).unwrap())
            .collect();
        assert_eq!(w, vec![0, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn frozen_bases_satisfy_whitney_parity() {
        for base in [figure_eight(), rectangle(), curl()] {
            let t = turning_number(&base).unwrap();
            let h = plane::self_intersections(&base).unwrap().len() as i64;
            assert_eq!(t.rem_euclid(2), (h + 1).rem_euclid(2));
        }
    }

    #[test]
    fn capacity_and_range_checks() {
        let xi = xi_assembly(2, 0, 0).unwrap();
        assert!(matches!(
            build_gamma(0, &xi, 278),
            Err(ConfigError::InvalidParams(_))
        ));
        assert!(build_gamma(0, &xi, 279).is_ok());
        assert!(matches!(
            build_gamma(6, &xi, 400),
            Err(ConfigError::InvalidParams(_))
        ));
        let not_xi = polterovich_sum(
            AssemblyKind::Lambda { g: 1 },
            vec![build_torus(TorusSpec::new(0, 0, 0)).unwrap()],
            vec![],
            false,
        )
        .unwrap();
        assert!(matches!(
            build_gamma(0, &not_xi, 400),
            Err(ConfigError::InvalidConstruction(_))
        ));
    }

    #[test]
    fn zero_block_circle_and_orientation_reversal() {
        let xi = xi_assembly(2, 0, 0).unwrap();
        let plain = ThreefoldLagrangian {
            base3: rectangle(),
            blocks: vec![],
            fiber_piece: xi.clone(),
            rotation_unit: 0,
            ambient_r: 279,
            displaced_pair: false,
            family_index: None,
        };
        assert_eq!(maslov_3d(&plain).unwrap(), 2);
        // Reversing the loop also reverses every cluster passage.
        let t3 = build_gamma(3, &xi, 400).unwrap();
        let reversed = ThreefoldLagrangian {
            base3: t3.base3.reversed(),
            blocks: t3
                .blocks
                .iter()
                .map(|blk| RotationBlock { repeats: -blk.repeats, placement: blk.placement.clone() })
                .collect(),
            ..t3.clone()
        };
        assert_eq!(maslov_3d(&reversed).unwrap(), -6);
        // Non-closing blocks are rejected.
        let mut broken = t3.clone();
        broken.blocks[0].repeats += 1;
        assert!(matches!(
            maslov_3d(&broken),
            Err(ConfigError::InvalidConstruction(_))
        ));
    }

    #[test]
    fn annulus_counts_match_the_census() {
        for &(k1, l1) in &[(0i64, 0i64), (1, 2), (2, 1), (3, 3)] {
            let xi = xi_assembly(2, k1, l1).unwrap();
            for n in 0..=3 {
                let t3 = build_gamma(n, &xi, 400).unwrap().with_displaced_pair();
                let expected_h = match n {
                    0 | 3 => 1usize,
                    _ => 0,
                };
                let report = annulus_count(&t3).unwrap();
                assert_eq!(report.h, expected_h);
                assert_eq!(report.count, expected_h as i64 * k1);
                assert_eq!(report.matched, expected_h as i64 * k1);
                assert_eq!(report.opposed, expected_h as i64 * (k1 + l1 + 1));
                assert_eq!(
                    report.matched + report.opposed,
                    expected_h as i64 * (2 * k1 + l1 + 1)
                );
            }
        }
        // The displaced partner is a precondition, not a default.
        let xi = xi_assembly(2, 1, 1).unwrap();
        let bare = build_gamma(0, &xi, 400).unwrap();
        assert!(matches!(
            annulus_count(&bare),
            Err(ConfigError::InvalidConstruction(_))
        ));
    }

    #[test]
    fn displaced_2d_count_is_the_green_tally() {
        for &(k, l, m) in &[(0i64, 2i64, 1i64), (3, 1, 0), (3, 2, 0), (2, 4, 2)] {
            let l0 = build_torus(TorusSpec::new(k, l, m)).unwrap();
            let lp = build_torus(TorusSpec::new(k, l, m).at(500, 0)).unwrap();
            assert_eq!(annulus_count_2d(&l0, &lp).unwrap() as i64, k);
        }
        // A non-parallel companion is rejected.
        let a = build_torus(TorusSpec::new(1, 0, 0)).unwrap();
        let b = build_torus(TorusSpec::new(2, 0, 0)).unwrap();
        assert!(matches!(
            annulus_count_2d(&a, &b),
            Err(ConfigError::InvalidConstruction(_))
        ));
    }

    #[test]
    fn rank_reduction_needs_one_base_crossing() {
        let xi = xi_assembly(3, 1, 1).unwrap();
        let t3 = build_gamma(0, &xi, 400).unwrap();
        // One transverse crossing with the figure-eight's lower edge:
        // the rank is the planar rank of the designated torus piece.
        let once = probe("lift-once", &[(7, -5), (7, 3)]);
        let suite = sphere_suite();
        let identity = [
            [Q::from_integer(1.into()), Q::from_integer(0.into())],
            [Q::from_integer(0.into()), Q::from_integer(1.into())],
        ];
        let shifted = TestSphere {
            name: suite.s1.name.clone(),
            path: suite.s1.path.transformed(&identity, &Pt::ints(0, 600)),
        };
        let outcome = hf_3d(&t3, &once, 1, &shifted).unwrap();
        assert_eq!(outcome.rank(), Some(1));
        // Disjoint projections pair trivially.
        let away = probe("lift-away", &[(100, -5), (100, 3)]);
        assert_eq!(hf_3d(&t3, &away, 1, &shifted).unwrap().rank(), Some(0));
        // Two crossings defeat the reduction.
        let twice = probe("lift-twice", &[(7, -5), (7, 7)]);
        assert!(matches!(
            hf_3d(&t3, &twice, 1, &shifted),
            Err(ConfigError::TopologicalObstruction(_))
        ));
    }

    #[test]
    fn product_invariant_vectors_and_gcd() {
        let neck = |name: &str, dy: i64| probe(name, &[(70, 30 + dy), (70, 340 + dy)]);
        let chain = |la: (i64, i64), lb: (i64, i64)| {
            polterovich_sum(
                AssemblyKind::Lambda { g: 2 },
                vec![
                    build_torus(TorusSpec::new(la.0, la.1, 0)).unwrap(),
                    build_torus(TorusSpec::new(lb.0, lb.1, 0).at(0, 400)).unwrap(),
                ],
                vec![(neck("neck-0", 0), 0)],
                false,
            )
            .unwrap()
        };
        let (vector, n) = c3_product_invariants(&chain((0, 1), (0, 2))).unwrap();
        assert_eq!(vector, vec![2, 2, 0, 4, 0]);
        assert_eq!(n, 1);
        let (_, n2) = c3_product_invariants(&chain((0, 2), (0, 4))).unwrap();
        let (_, n3) = c3_product_invariants(&chain((0, 3), (0, 6))).unwrap();
        assert_eq!((n2, n3), (2, 3));
        assert_ne!(n2, n3);
        // Balanced pieces leave the sentinel zero.
        let (vector0, n0) = c3_product_invariants(&chain((2, 2), (1, 1))).unwrap();
        assert_eq!(vector0, vec![2, 0, 0, 0, 0]);
        assert_eq!(n0, 0);
    }
}
