use qcluster_core::coeff::{QCoeff, QLaurent};
use qcluster_core::mutate::{run_schedule, MonomialMap};
use qcluster_core::qgroup::{tensor_embedding, Embedding, Generator};
use qcluster_core::qtorus::{Monomial, Seed, TorusElement};
use qcluster_core::quiver::{binomial, build_zn, half_dehn_schedule, theta, ZnQuiver};
use qcluster_core::rmatrix::*;
use qcluster_core::Error;

fn dd_word(dd: &Seed, qpow: i64, vs: &[(usize, i64)]) -> Monomial {
    let mut out = Monomial::one(dd.len()).with_coef(QCoeff::q_pow(qpow));
    for &(v, e) in vs {
        out = dd.mono_mul(&out, &dd.mono_pow(&Monomial::var(dd.len(), v), e).unwrap());
    }
    out
}

#[test]
fn cartan_flip_swaps_nonfrozen_variables() {
    for n in 1..=3 {
        let z = build_zn(n).unwrap();
        let f = cartan_flip_map(&z).unwrap();
        let d = &z.d.seed;
        let len = z.seed.len();
        for x in (0..d.len()).filter(|&x| !d.is_frozen(x)) {
            assert_eq!(f.images[z.left[x]], Monomial::var(len, z.right[x]));
            assert_eq!(f.images[z.right[x]], Monomial::var(len, z.left[x]));
        }
    }
}

/// The three displayed images along each `ΛV_r`-path, built in `D ⊔ D`.
#[test]
fn cartan_flip_on_frozen_variables() {
    for n in 1..=3 {
        let z = build_zn(n).unwrap();
        let f = cartan_flip_map(&z).unwrap();
        let t = tensor_embedding(&z);
        let h = z.d.seed.len();
        let dd = &t.target;
        for r in 1..=n {
            let th = theta(n, r);
            let x = |k: usize| z.d.lam(th, k as i64 - 1 - th as i64);
            let y = |k: usize| h + z.d.v(r, k as i64 - 1 - r as i64);
            let top_x = z.left[x(2 * th + 1)];
            let glued = z.left[x(1)];
            assert_eq!(glued, z.right[y(1) - h]);
            let top_y = z.right[y(2 * r + 1) - h];

            let mut a: Vec<(usize, i64)> = (1..=2 * th + 1).map(|k| (x(k), 1)).collect();
            a.push((y(1), 1));
            let mut b: Vec<(usize, i64)> = (1..=2 * th).rev().map(|k| (x(k), -1)).collect();
            b.extend((1..=2 * r).rev().map(|k| (y(k), -1)));
            let mut c = vec![(x(1), 1)];
            c.extend((1..=2 * r + 1).map(|k| (y(k), 1)));

            assert_eq!(t.apply(&f.images[top_x]).unwrap(), dd_word(dd, 2 * th as i64, &a), "n={} r={}", n, r);
            assert_eq!(t.apply(&f.images[glued]).unwrap(), dd_word(dd, -2 * n as i64, &b), "n={} r={}", n, r);
            assert_eq!(t.apply(&f.images[top_y]).unwrap(), dd_word(dd, 2 * r as i64, &c), "n={} r={}", n, r);
        }
    }
}

#[test]
fn cartan_flip_rank_one() {
    // Z_1: ΛV_1-path 1, 6, 3, 4, 5 (figure numbering); X_3 = 1, X_2 = 6,
    // X_1Y_1 = 3, Y_2 = 4, Y_3 = 5
    let z = build_zn(1).unwrap();
    assert_eq!(lv_path(&z, 1).unwrap(), vec![0, 5, 2, 3, 4]);
    let f = cartan_flip_rank(1).unwrap();
    let s = &z.seed;
    let t = tensor_embedding(&z);
    let dd = &t.target;
    // X_1 ⊗ 1 and 1 ⊗ Y_1 for the glued vertex
    let (x1, y1) = (z.d.lam(1, -1), 4 + z.d.v(1, -1));
    let (x2, x3) = (z.d.lam(1, 0), z.d.lam(1, 1));
    let (y2, y3) = (4 + z.d.v(1, 0), 4 + z.d.v(1, 1));
    assert_eq!(t.apply(&f.images[0]).unwrap(), dd_word(dd, 2, &[(x1, 1), (x2, 1), (x3, 1), (y1, 1)]));
    assert_eq!(t.apply(&f.images[2]).unwrap(), dd_word(dd, -2, &[(x2, -1), (x1, -1), (y2, -1), (y1, -1)]));
    assert_eq!(t.apply(&f.images[4]).unwrap(), dd_word(dd, 2, &[(x1, 1), (y1, 1), (y2, 1), (y3, 1)]));
    assert!(f.is_homomorphism());
    let _ = s;
}

#[test]
fn cartan_flip_is_invertible() {
    for n in 1..=2 {
        let f = cartan_flip_rank(n).unwrap();
        assert!(f.is_homomorphism());
        let g = invert_monomial_map(&f).unwrap();
        assert_eq!(f.compose(&g).unwrap(), MonomialMap::identity(&f.source));
        assert_eq!(g.compose(&f).unwrap(), MonomialMap::identity(&f.source));
    }
}

#[test]
fn cartan_action_is_multiplicative() {
    let emb = Embedding::new(2).unwrap();
    let act = CartanAction::new(&emb).unwrap();
    let dd = act.seed().clone();
    let n = dd.len();
    for a in 0..n {
        for b in 0..n {
            let (ma, mb) = (Monomial::var(n, a), Monomial::var(n, b));
            let lhs = act.apply(&dd.mono_mul(&ma, &mb)).unwrap();
            let rhs = dd.mono_mul(&act.apply(&ma).unwrap(), &act.apply(&mb).unwrap());
            assert_eq!(lhs, rhs, "{} {}", a, b);
        }
    }
}

#[test]
fn cartan_lemma_holds() {
    for n in 1..=3 {
        assert!(verify_lemk(n).unwrap(), "n={}", n);
    }
}

fn corrupted(z: &ZnQuiver) -> Vec<usize> {
    let mut s = z.sigma.clone();
    let movable: Vec<usize> = (0..s.len()).filter(|&v| !z.seed.is_frozen(v)).collect();
    s.swap(movable[0], movable[1]);
    s
}

#[test]
fn cartan_lemma_negative_controls() {
    for n in 1..=2 {
        let z = build_zn(n).unwrap();
        assert!(!verify_lemk_with(&z, &corrupted(&z)).unwrap());
        let mut inv = vec![0; z.sigma.len()];
        for (v, &s) in z.sigma.iter().enumerate() {
            inv[s] = v;
        }
        assert!(!verify_lemk_with(&z, &inv).unwrap());
    }
}

#[test]
fn mn_figure_matches_schedule() {
    for n in 1..=3 {
        let z = build_zn(n).unwrap();
        let (sched, _) = half_dehn_schedule(&z).unwrap();
        let run = run_schedule(&z.seed, &sched.steps).unwrap();
        for i in 1..=n {
            let act = mn_path_action(&z, i).unwrap();
            assert_eq!(act.len(), 2 * n + 3);
            for (v, m) in &act {
                assert_eq!(&run.m.images[*v], m, "n={} i={} v={}", n, i, v);
            }
            // the leftmost frozen vertex goes to Z_-, as P∘Ad_K says too
            let f = cartan_flip_map(&z).unwrap();
            assert_eq!(act[0].1, f.images[act[0].0]);
        }
    }
    // n = 2, i = 1: the path 1, 7, 16, 9, 3, 4, 5
    let z = build_zn(2).unwrap();
    assert_eq!(lv_path(&z, 1).unwrap(), vec![0, 6, 15, 8, 2, 3, 4]);
    assert!(mn_path_action(&z, 3).is_err());
}

fn sl3_fixture() -> Vec<(usize, i64, usize, i64)> {
    vec![
        (1, -1, 2, -2),
        (1, 0, 2, -2),
        (2, -2, 1, -1),
        (2, -1, 1, -1),
        (2, 0, 1, -1),
        (2, 1, 1, -1),
        (1, -1, 2, -1),
        (1, 0, 2, -1),
        (1, -1, 2, 0),
        (1, 0, 2, 0),
        (2, -2, 1, 0),
        (2, -1, 1, 0),
        (2, 0, 1, 0),
        (2, 1, 1, 0),
        (1, -1, 2, 1),
        (1, 0, 2, 1),
    ]
}

#[test]
fn rfact1_sl3_example() {
    let emb = Embedding::new(2).unwrap();
    let s = gen_rfact1(2).unwrap();
    assert_eq!(s.provenance, Provenance::RFact1);
    let want = sl3_fixture();
    assert_eq!(s.len(), want.len());
    for (f, &(j, i, a, b)) in s.factors.iter().zip(&want) {
        assert_eq!(f.label, wm_label(j, i, a, b));
        assert_eq!(f.arg, tensor_monomial(&emb.w(j, i).unwrap(), &emb.m(a, b).unwrap()));
    }
    assert_eq!(s.factors[0].label, "w_1^-1⊗m_2^-2");
}

/// `w_1 ↦ X_1`, `w_2 ↦ qX_1X_2`, `w_3 ↦ X_3`, `w_4 ↦ qX_3X_4` in `D_1`.
fn faddeev_variables() -> (Seed, [Monomial; 4]) {
    let emb = Embedding::new(1).unwrap();
    let s = emb.seed().clone();
    let w = [Monomial::var(4, 0), s.word(&[0, 1]).scale(&QCoeff::q_pow(1)), Monomial::var(4, 2), s.word(&[2, 3]).scale(&QCoeff::q_pow(1))];
    (s, w)
}

/// `Ψ^q` arguments of the rank one factorization `Ψ(w_1⊗w_3)Ψ(w_1⊗w_4)Ψ(w_2⊗w_3)Ψ(w_2⊗w_4)`.
fn faddeev_arguments() -> Vec<Monomial> {
    let (_, w) = faddeev_variables();
    [(0, 2), (0, 3), (1, 2), (1, 3)].iter().map(|&(a, b)| tensor_monomial(&w[a], &w[b])).collect()
}

fn big_psi_args(s: &FactorSequence) -> Vec<Monomial> {
    s.factors.iter().map(|f| f.arg.with_coef(f.arg.coef.neg())).collect()
}

#[test]
fn rank_one_sequences() {
    let want = faddeev_arguments();
    // the printed form: X_1⊗X_3, qX_1⊗X_3X_4, qX_1X_2⊗X_3, q²X_1X_2⊗X_3X_4
    assert_eq!(want[0], Monomial::new(vec![1, 0, 0, 0, 0, 0, 1, 0], QCoeff::one()));
    assert_eq!(want[1], Monomial::new(vec![1, 0, 0, 0, 0, 0, 1, 1], QCoeff::q_pow(1)));
    assert_eq!(want[2], Monomial::new(vec![1, 1, 0, 0, 0, 0, 1, 0], QCoeff::q_pow(1)));
    assert_eq!(want[3], Monomial::new(vec![1, 1, 0, 0, 0, 0, 1, 1], QCoeff::q_pow(2)));
    assert_eq!(big_psi_args(&phi_args_from_twist(1).unwrap()), want);
    let r1 = gen_rfact1(1).unwrap();
    let mut got = big_psi_args(&r1);
    let mut sorted = want.clone();
    got.sort_by(|a, b| a.exp.cmp(&b.exp));
    sorted.sort_by(|a, b| a.exp.cmp(&b.exp));
    assert_eq!(got, sorted);
    assert_eq!(gen_rfact2(1).unwrap().args(), r1.args());
}

#[test]
fn rank_one_embedding_matches_faddeev() {
    let emb = Embedding::new(1).unwrap();
    let (s, w) = faddeev_variables();
    let i = QCoeff::i_q(1, 0);
    let sum = |a: &Monomial, b: &Monomial| TorusElement::from_monomials(4, [a.clone(), b.clone()]).scale(&i);
    let prod = |a: &Monomial, b: &Monomial| TorusElement::from_monomial(s.mono_mul(a, b).scale(&QCoeff::q_pow(1)));
    assert_eq!(emb.image(Generator::E(1)).unwrap(), sum(&w[0], &w[1]));
    assert_eq!(emb.image(Generator::F(1)).unwrap(), sum(&w[2], &w[3]));
    assert_eq!(emb.image(Generator::K(1)).unwrap(), prod(&w[1], &w[2]));
    assert_eq!(emb.image(Generator::Kp(1)).unwrap(), prod(&w[3], &w[0]));
}

#[test]
fn sequence_lengths() {
    for n in 1..=4 {
        let want = 4 * binomial(n + 2, 3);
        assert_eq!(sequence_length(n), want);
        assert_eq!(gen_rfact1(n).unwrap().len(), want);
        assert_eq!(gen_rfact2(n).unwrap().len(), want);
        assert_eq!(gen_rfactor_triangular(n).unwrap().expand().unwrap().len(), want);
    }
    for n in 1..=3 {
        assert_eq!(phi_args_from_twist(n).unwrap().len(), 4 * binomial(n + 2, 3));
    }
    assert_eq!(sequence_length(3), 40);
}

#[test]
fn arguments_are_monomials_with_unit_coefficients() {
    for n in 1..=3 {
        for s in [gen_rfact1(n).unwrap(), gen_rfact2(n).unwrap(), phi_args_from_twist(n).unwrap()] {
            for f in &s.factors {
                let (c, _) = f.arg.coef.as_monomial().expect("q-power coefficient");
                let unit = (0..4).any(|k| c == qcluster_core::coeff::GaussianRational::i_pow(k));
                assert!(unit, "{} {}", s.provenance.name(), f.label);
            }
        }
    }
}

#[test]
fn multisets_agree() {
    for n in 1..=3 {
        let r1 = gen_rfact1(n).unwrap();
        assert!(r1.same_multiset(&gen_rfact2(n).unwrap()), "n={}", n);
        assert!(r1.same_multiset(&phi_args_from_twist(n).unwrap()), "n={}", n);
    }
    // without P the flip factorization has m on the left and does not match
    let r2 = gen_rfact2(2).unwrap();
    let mut raw = r2.clone();
    for f in raw.factors.iter_mut() {
        f.arg = swap_factors(&f.arg);
    }
    assert!(!raw.same_multiset(&gen_rfact1(2).unwrap()));
}

#[test]
fn phi_arguments_carry_labels() {
    for n in 1..=3 {
        let p = phi_args_from_twist(n).unwrap();
        assert!(p.factors.iter().all(|f| f.label != "?"), "n={}", n);
    }
}

#[test]
fn three_way_equivalence() {
    for n in 1..=3 {
        let r1 = gen_rfact1(n).unwrap();
        let r2 = gen_rfact2(n).unwrap();
        let ph = phi_args_from_twist(n).unwrap();
        assert!(equivalent_mod_commuting_swaps(&r1, &r2).unwrap(), "n={}", n);
        assert!(equivalent_mod_commuting_swaps(&r2, &r1).unwrap(), "n={}", n);
        assert!(equivalent_mod_commuting_swaps(&ph, &r2).unwrap(), "n={}", n);
        assert!(equivalent_mod_commuting_swaps(&r1, &ph).unwrap(), "n={}", n);
    }
}

#[test]
fn equivalence_basics() {
    let s = gen_rfact1(2).unwrap();
    assert!(equivalent_mod_commuting_swaps(&s, &s).unwrap());
    let dd = &s.seed;
    let comm = |a: usize, b: usize| dd.comm2(&s.factors[a].arg.exp, &s.factors[b].arg.exp);
    // factors 1, 2 (w_1^0⊗m_2^-2, w_2^-2⊗m_1^-1) and 0, 1 (w_1^{-1}, w_1^0 on m_2^{-2})
    let mut t = s.clone();
    let k = (0..s.len() - 1).find(|&k| comm(k, k + 1) == 0).unwrap();
    t.factors.swap(k, k + 1);
    assert!(equivalent_mod_commuting_swaps(&s, &t).unwrap());
    assert_eq!(comm(0, 1), -2);
    let mut u = s.clone();
    u.factors.swap(0, 1);
    assert!(!equivalent_mod_commuting_swaps(&s, &u).unwrap());
    let mut short = s.clone();
    short.factors.pop();
    assert!(matches!(equivalent_mod_commuting_swaps(&s, &short), Err(Error::BadShape(_))));
    // a different argument is not reachable
    let mut v = s.clone();
    v.factors[3].arg = v.factors[3].arg.scale(&QCoeff::q_pow(1));
    assert!(!equivalent_mod_commuting_swaps(&s, &v).unwrap());
}

/// Factors sharing a value of `k` do not all commute: on a common `w`-path
/// they `q^{-2}`-commute, and some pairs on adjacent paths `q^2`-commute, so
/// the order inside each `k` matters too.
#[test]
fn factors_with_fixed_k() {
    for n in 1..=3 {
        let s = gen_rfact1(n).unwrap();
        let dd = &s.seed;
        let th = |x: usize| theta(n, x);
        // (path j, group) per factor, in generation order
        let mut tags = Vec::new();
        for k in 1..=n {
            for j in 1..=th(k) {
                tags.extend(std::iter::repeat_n((j, k), 2 * j));
            }
        }
        for k in 1..=n {
            for j in th(k)..=n {
                tags.extend(std::iter::repeat_n((th(j), n + k), 2 * th(j)));
            }
        }
        assert_eq!(tags.len(), s.len());
        let mut cross = 0;
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                if tags[a].1 != tags[b].1 {
                    continue;
                }
                let c = dd.comm2(&s.factors[a].arg.exp, &s.factors[b].arg.exp);
                if tags[a].0 == tags[b].0 {
                    assert_eq!(c, -2, "n={} {} {}", n, s.factors[a].label, s.factors[b].label);
                } else {
                    assert!(c == 0 || c == 2, "n={} {} {}", n, s.factors[a].label, s.factors[b].label);
                    if c != 0 {
                        cross += 1;
                    }
                }
            }
        }
        assert_eq!(cross > 0, n > 1, "n={}", n);
    }
}

#[test]
fn triangular_layout() {
    let t = gen_rfactor_triangular(1).unwrap();
    let labels: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(|c| c.label()).collect()).collect();
    assert_eq!(labels, vec![vec!["E_1⊗m_1^-1".to_string()], vec!["E_1⊗m_1^0".to_string()]]);
    let t = gen_rfactor_triangular(3).unwrap();
    let labels: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(|c| c.label()).collect()).collect();
    let want: Vec<Vec<&str>> = vec![
        vec!["E_1⊗m_3^-3", "E_2⊗m_2^-2", "E_3⊗m_1^-1"],
        vec!["E_1⊗m_3^-2", "E_2⊗m_2^-1"],
        vec!["E_1⊗m_3^-1"],
        vec!["E_1⊗m_3^0"],
        vec!["E_2⊗m_2^0", "E_1⊗m_3^1"],
        vec!["E_3⊗m_1^0", "E_2⊗m_2^1", "E_1⊗m_3^2"],
    ];
    assert_eq!(labels, want);
    for n in 1..=4 {
        let t = gen_rfactor_triangular(n).unwrap();
        assert_eq!(t.rows.len(), 2 * n);
        assert_eq!(t.composite_count(), n * (n + 1));
    }
}

#[test]
fn triangular_summands_add_up() {
    for n in 1..=3 {
        let emb = Embedding::new(n).unwrap();
        let t = gen_rfactor_triangular(n).unwrap();
        for cf in t.rows.iter().flatten() {
            let sum = TorusElement::from_monomials(t.seed.len(), cf.summands.iter().map(|f| f.arg.clone()));
            let m = TorusElement::from_monomial(emb.m(cf.a, cf.b).unwrap());
            let want = qcluster_core::qgroup::tensor(&emb.image(Generator::E(cf.c)).unwrap(), &m);
            assert_eq!(sum, want, "{}", cf.label());
        }
    }
}

#[test]
fn triangular_expansion_equals_rfact1() {
    for n in 1..=3 {
        let e = gen_rfactor_triangular(n).unwrap().expand().unwrap();
        assert_eq!(e.args(), gen_rfact1(n).unwrap().args(), "n={}", n);
    }
    let e = gen_rfactor_triangular(2).unwrap().expand().unwrap();
    let labels: Vec<String> = e.factors.iter().map(|f| f.label.clone()).collect();
    let want: Vec<String> = sl3_fixture().iter().map(|&(j, i, a, b)| wm_label(j, i, a, b)).collect();
    assert_eq!(labels, want);
}

#[test]
fn triangular_expansion_rejects_bad_order() {
    let mut t = gen_rfactor_triangular(2).unwrap();
    t.rows[0][0].summands.reverse();
    assert!(matches!(t.expand(), Err(Error::BadShape(_))));
}

#[test]
fn psi_series_coefficients() {
    assert!(psi_series(0).unwrap().terms == TorusElement::one(1));
    let s1 = psi_series(1).unwrap();
    let c1 = QCoeff::q_pow(1).mul(&QCoeff::q_pow(2).sub(&QCoeff::one()).inv().unwrap());
    assert_eq!(s1.terms.coef(&[1]), c1);
    assert_eq!(s1.terms.len(), 2);
    // Ψ^q(x)·(1+qx) = Ψ^q(q²x)
    let d = 6;
    let s = psi_series(d).unwrap();
    let c = dilog_coefficients(d as usize).unwrap();
    for k in 1..=d as usize {
        assert_eq!(s.terms.coef(&[k as i64]), c[k]);
        let lhs = c[k].add(&c[k - 1].shift(1));
        assert_eq!(lhs, c[k].shift(2 * k as i64));
    }
}

/// `1/∏_{j<J}(1 + q^{2j+1}x)` agrees with `Ψ^q` up to `q^{2J}` in each
/// coefficient of `x`.
#[test]
fn psi_series_matches_finite_products() {
    let big_j = 6;
    let d = 4usize;
    // coefficients in x of the inverse product, as q-polynomials
    let mut inv: Vec<QLaurent> = vec![QLaurent::one()];
    inv.resize(d + 1, QLaurent::zero());
    for j in 0..big_j {
        // divide by (1 + q^{2j+1} x): a_k ← a_k − q^{2j+1} a_{k-1}
        for k in 1..=d {
            let prev = inv[k - 1].shift(2 * j as i64 + 1);
            inv[k] = &inv[k] - &prev;
        }
    }
    let c = dilog_coefficients(d).unwrap();
    for k in 0..=d {
        // c_k·den − inv_k·den = num − inv_k·den vanishes below q^{2J+1}
        let diff = c[k].num() - &(&inv[k] * c[k].den());
        let low = diff.min_exp().unwrap_or(i64::MAX);
        let den_low = c[k].den().min_exp().unwrap();
        assert!(low - den_low > 2 * big_j as i64, "k={} low={} den_low={}", k, low, den_low);
    }
}

#[test]
fn dilog_identities_to_degree_six() {
    let checks = dilog_identities(6).unwrap();
    for c in &checks {
        let expected = DILOG_IDENTITIES.contains(&c.name.as_str());
        assert_eq!(c.holds, expected, "{}", c.name);
    }
    assert!(verify_pentagon(6).unwrap());
    assert!(verify_pentagon(0).unwrap());
}

#[test]
fn series_ring_truncates() {
    let r = uv_ring(3).unwrap();
    let u = TorusElement::var(2, 0);
    let big = r.truncate(&r.seed.pow(&u, 4));
    assert!(big.terms.is_zero());
    let x = r.psi(&u).unwrap();
    assert!(x.terms.monomials().all(|m| m.exp.iter().sum::<i64>() <= 3));
    assert!(r.big_psi(&TorusElement::one(2)).is_err());
}

#[test]
fn pent_lemma_rank_two() {
    let inst = pent_lemma_instances(2);
    assert_eq!(inst, vec![(1, 1, -1), (1, 1, 0), (1, 1, 1)]);
    for (i, j, s) in inst {
        assert!(verify_pent_lemma_instance(2, i, j, s, 4).unwrap(), "({},{},{})", i, j, s);
    }
}

#[test]
fn pent_lemma_top_level_is_empty() {
    let emb = Embedding::new(2).unwrap();
    // at s = θ(j+1) every sum is empty and only ψ(C) is left on each side
    let args = pent_lemma_args(&emb, 1, 1, 1).unwrap();
    assert!(args.a.is_zero() && args.b.is_zero() && args.b_next.is_zero());
    assert!(!args.c.is_zero());
    let args = pent_lemma_args(&emb, 1, 1, 0).unwrap();
    assert!(!args.a.is_zero() && !args.b.is_zero() && args.b_next.is_zero());
}

#[test]
fn pent_lemma_negative_controls() {
    for (i, j, s) in [(1, 1, -1), (1, 1, 0)] {
        let (l, r) = pent_lemma_sides(2, i, j, s, 4, |mut a| {
            a.c = a.c.neg();
            a
        })
        .unwrap();
        assert!(!l.eq_series(&r), "({},{},{})", i, j, s);
        // dropping the last factor's shift also breaks it
        let (l, r) = pent_lemma_sides(2, i, j, s, 4, |mut a| {
            a.b_next = a.b.clone();
            a
        })
        .unwrap();
        assert!(!l.eq_series(&r), "({},{},{})", i, j, s);
    }
}

#[test]
fn pent_lemma_rank_three_sample() {
    for (i, j, s) in [(1, 2, -1), (1, 2, 0), (1, 1, 0), (2, 2, 0)] {
        assert!(verify_pent_lemma_instance(3, i, j, s, 4).unwrap(), "({},{},{})", i, j, s);
    }
    assert!(pent_lemma_args(&Embedding::new(3).unwrap(), 1, 3, 0).is_err());
}

#[test]
fn height_grading_of_root_vectors() {
    let emb = Embedding::new(3).unwrap();
    let g = height_grading(&emb).unwrap();
    let h = emb.seed().len();
    let ring = SeriesRing::new(emb.seed().disjoint_union(emb.seed()), g, 10).unwrap();
    for (i, j) in emb.roots_in_order() {
        let e = emb.root(qcluster_core::qgroup::RootKind::E, i, j).unwrap();
        for m in e.monomials() {
            let mut exp = m.exp.clone();
            exp.extend(vec![0; h]);
            assert_eq!(ring.degree(&exp), num_rational::Rational64::from((j - i + 1) as i64));
        }
    }
}
