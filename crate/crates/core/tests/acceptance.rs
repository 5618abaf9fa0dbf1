//! Acceptance suite. Every test prints one `PASS`/`FAIL` line for its
//! criterion; run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use rand::Rng;
use simplicia::bistellar::{
    apply_move, bistellarly_equivalent, is_isomorphic, randomize, reduce, valid_moves, ReductionOptions,
};
use simplicia::blowup::{blowup, singular_vertices, ResolutionBlock};
use simplicia::generators::{boundary_simplex, cross_polytope, cyclic_polytope_boundary};
use simplicia::invariants::{
    abelianization, euler_characteristic, fundamental_group_presentation, hg_from_f_vector, homology, is_orientable,
    smith_normal_form, HomologyProfile, IntegerMatrix,
};
use simplicia::slicing::{ns_triangulation, slicing, surface_type, VertexPartition};
use simplicia::store::{self, ComplexDocument, Library};
use simplicia::Complex;

type Outcome = Result<String, String>;

fn report(n: usize, title: &str, outcome: Outcome) {
    match outcome {
        Ok(detail) => println!("criterion {n} PASS  {title}: {detail}"),
        Err(why) => {
            println!("criterion {n} FAIL  {title}: {why}");
            panic!("criterion {n} failed: {why}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, limit {limit:?}");
    Ok(t)
}

fn profile(pairs: &[(u64, &[u64])]) -> HomologyProfile {
    HomologyProfile::from_pairs(pairs)
}

fn open_library() -> Option<Library> {
    let dir = store::library_dir();
    if !dir.is_dir() {
        return None;
    }
    Some(Library::open_default().expect("fixture library loads"))
}

#[test]
fn criterion_1_cyclic_polytope() {
    report(1, "cyclic polytope C(10,4)", (|| {
        let start = Instant::now();
        let c = cyclic_polytope_boundary(4, 10).map_err(|e| e.to_string())?;
        ensure!(c.f_vector() == [10, 45, 70, 35], "f-vector {:?}", c.f_vector());
        ensure!(euler_characteristic(&c) == 0, "chi {}", euler_characteristic(&c));
        let h = homology(&c);
        ensure!(h == profile(&[(0, &[]), (0, &[]), (0, &[]), (1, &[])]), "homology {h}");
        let flags = c.structural_flags();
        ensure!(flags.is_pure, "not pure");
        ensure!(flags.is_closed_pseudomanifold(), "not a closed pseudomanifold");
        ensure!(flags.is_strongly_connected, "not strongly connected");
        let t = within(start, Duration::from_secs(1))?;
        Ok(format!("f=[10,45,70,35], chi=0, H={h}, {t:?}"))
    })());
}

#[test]
fn criterion_2_slicing() {
    report(2, "odd/even slicing of C(10,4)", (|| {
        let start = Instant::now();
        let c = cyclic_polytope_boundary(4, 10).map_err(|e| e.to_string())?;
        let p = VertexPartition::new([1, 3, 5, 7, 9], [2, 4, 6, 8, 10]).map_err(|e| e.to_string())?;
        let ns = slicing(&c, &p).map_err(|e| e.to_string())?;
        ensure!(ns.f_vector() == [25, 70, 0, 35], "normal surface f-vector {:?}", ns.f_vector());
        ensure!(ns.euler_characteristic() == -10, "chi {}", ns.euler_characteristic());
        let ty = surface_type(&ns).map_err(|e| e.to_string())?;
        ensure!(ty.components == 1, "{} components", ty.components);
        ensure!(ty.orientable, "not orientable");
        ensure!(ty.to_string() == "(T^2)#6", "type {ty}");
        let t = ns_triangulation(&ns);
        ensure!(t.f_vector() == [25, 105, 70], "triangulation f-vector {:?}", t.f_vector());
        let h = homology(&t);
        ensure!(h.betti_numbers() == [0, 12, 1], "triangulation betti {:?}", h.betti_numbers());
        ensure!(h.entries.iter().all(|e| e.torsion.is_empty()), "torsion in {h}");
        let elapsed = within(start, Duration::from_secs(1))?;
        Ok(format!("[25,70,0,35], chi=-10, \"{ty}\", triangulated [25,105,70], {elapsed:?}"))
    })());
}

/// `h_k = sum_i (-1)^(k-i) C(d+1-i, k-i) f_{i-1}`, evaluated with exact
/// integer arithmetic, independently of the library.
fn h_oracle(f: &[i64]) -> Vec<i64> {
    fn choose(n: i64, k: i64) -> i64 {
        if k < 0 || k > n {
            return 0;
        }
        let mut num = 1i128;
        let mut den = 1i128;
        for i in 0..k {
            num *= (n - i) as i128;
            den *= (i + 1) as i128;
        }
        (num / den) as i64
    }
    let d = f.len() as i64 - 1;
    let fm = |i: i64| if i == 0 { 1 } else { f[(i - 1) as usize] };
    (0..=d + 1)
        .map(|k| (0..=k).map(|i| (-1i64).pow((k - i) as u32) * choose(d + 1 - i, k - i) * fm(i)).sum())
        .collect()
}

#[test]
fn criterion_3_hg_vectors() {
    report(3, "h/g-vectors of f=[16,120,400,480,192]", (|| {
        let f = [16u64, 120, 400, 480, 192];
        let hg = hg_from_f_vector(&f);
        let h = hg.transcript_h();
        let g = hg.transcript_g();
        ensure!(h == [11, 66, 126, -19, 7], "H={h:?}");
        ensure!(g == [10, 55, 60], "G={g:?}");
        let oracle = h_oracle(&f.map(|x| x as i64));
        ensure!(oracle == hg.h, "oracle h {oracle:?} vs {:?}", hg.h);
        let g_oracle: Vec<i64> = (1..=3).map(|k| oracle[k] - oracle[k - 1]).collect();
        ensure!(g_oracle == g, "oracle g {g_oracle:?}");
        Ok(format!("H={h:?}, G={g:?}"))
    })());
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// k x k minors and `s_k = d_k / d_{k-1}` while `d_k != 0`.
fn invariant_factor_oracle(m: &[Vec<i64>]) -> Vec<i64> {
    let (rows, cols) = (m.len(), m[0].len());
    let mut out = Vec::new();
    let mut prev = 1i64;
    for k in 1..=rows.min(cols) {
        let mut dk = 0i64;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                dk = gcd(dk, det(&minor));
            }
        }
        if dk == 0 {
            break;
        }
        out.push(dk / prev);
        prev = dk;
    }
    out
}

#[test]
fn criterion_4_homology_engine() {
    report(4, "SNF oracle and surface homology", (|| {
        let start = Instant::now();
        let mut rng = simplicia::rng::seeded(4);
        for trial in 0..200 {
            let sparse = trial % 2 == 1;
            let m: Vec<Vec<i64>> = (0..6)
                .map(|_| {
                    (0..6)
                        .map(|_| {
                            if sparse {
                                // Mostly zero, even entries: rank drops and torsion appears.
                                if rng.gen_bool(0.6) {
                                    0
                                } else {
                                    2 * rng.gen_range(-4..=4)
                                }
                            } else {
                                rng.gen_range(-9..=9)
                            }
                        })
                        .collect()
                })
                .collect();
            let snf = smith_normal_form(&IntegerMatrix::from_dense(&m));
            let got: Vec<i64> = snf
                .invariant_factors
                .iter()
                .map(|x| x.to_string().parse::<i64>().expect("small factor"))
                .collect();
            let expected = invariant_factor_oracle(&m);
            ensure!(got == expected, "matrix {m:?}: SNF {got:?}, oracle {expected:?}");
            ensure!(snf.rank == expected.len(), "matrix {m:?}: rank {}", snf.rank);
        }
        let library = open_library().ok_or("fixture library missing")?;
        let rp2 = library.get("RP^2 (6 vertices)").ok_or("no RP^2 fixture")?;
        let h = homology(&rp2.complex);
        ensure!(h == profile(&[(0, &[]), (0, &[2]), (0, &[])]), "RP^2 homology {h}");
        let torus = library.get("T^2 (9 vertices)").ok_or("no torus fixture")?;
        let ht = homology(&torus.complex);
        ensure!(ht == profile(&[(0, &[]), (2, &[]), (1, &[])]), "torus homology {ht}");
        let t = within(start, Duration::from_secs(10))?;
        Ok(format!("200/200 matrices agree, RP^2 {h}, T^2 {ht}, {t:?}"))
    })());
}

fn invariance_run(c: &Complex, sequences: u64, seed_base: u64) -> Result<usize, String> {
    let h0 = homology(c);
    let chi0 = euler_characteristic(c);
    let o0 = is_orientable(c).map_err(|e| e.to_string())?;
    let mut total = 0;
    for seed in 0..sequences {
        let mut rng = simplicia::rng::seeded(seed_base + seed);
        let length = rng.gen_range(1..=30);
        let mut cur = c.clone();
        for step in 0..length {
            let moves = valid_moves(&cur, None).map_err(|e| e.to_string())?;
            ensure!(!moves.is_empty(), "seed {seed} step {step}: no valid move");
            let m = &moves[rng.gen_range(0..moves.len())];
            let next = apply_move(&cur, m).map_err(|e| format!("seed {seed} step {step}: {e}"))?;
            ensure!(homology(&next) == h0, "seed {seed} step {step}: homology {}", homology(&next));
            ensure!(euler_characteristic(&next) == chi0, "seed {seed} step {step}: chi changed");
            ensure!(
                is_orientable(&next).map_err(|e| e.to_string())? == o0,
                "seed {seed} step {step}: orientability changed"
            );
            let back = apply_move(&next, &m.inverse(&cur)).map_err(|e| format!("seed {seed} step {step}: {e}"))?;
            ensure!(back == cur, "seed {seed} step {step}: inverse of {m:?} does not restore");
            ensure!(
                ComplexDocument::from_complex(&back).facets == ComplexDocument::from_complex(&cur).facets,
                "seed {seed} step {step}: facet lists differ"
            );
            cur = next;
            total += 1;
        }
    }
    Ok(total)
}

#[test]
fn criterion_5_bistellar_invariance() {
    report(5, "bistellar invariance and involution", (|| {
        let start = Instant::now();
        let a = invariance_run(&boundary_simplex(5).map_err(|e| e.to_string())?, 100, 5_000)?;
        let b = invariance_run(&cross_polytope(3).map_err(|e| e.to_string())?, 100, 6_000)?;
        let t = within(start, Duration::from_secs(30))?;
        Ok(format!("{a} moves on the boundary of the 4-simplex, {b} on the octahedron, {t:?}"))
    })());
}

#[test]
fn criterion_6_reduction_round_trip() {
    report(6, "reduce(randomize(boundary of 4-simplex, 50))", (|| {
        let start = Instant::now();
        let target = boundary_simplex(5).map_err(|e| e.to_string())?;
        let mut recognised = 0;
        let mut not_established = Vec::new();
        for seed in 0..100 {
            let r = randomize(&target, 50, seed).map_err(|e| e.to_string())?;
            let red = reduce(&r.complex, &ReductionOptions::default().with_seed(seed)).map_err(|e| e.to_string())?;
            ensure!(homology(&red.complex) == homology(&target), "seed {seed}: reduction changed homology");
            if is_isomorphic(&red.complex, &target).is_some() {
                recognised += 1;
            } else {
                ensure!(!red.converged, "seed {seed}: converged to a non-isomorphic complex");
                not_established.push(seed);
            }
        }
        ensure!(recognised >= 95, "only {recognised}/100 (not established: {not_established:?})");
        let t = within(start, Duration::from_secs(120))?;
        Ok(format!("{recognised}/100 isomorphic, {t:?}"))
    })());
}

#[test]
fn criterion_7_kummer_suite() {
    let Some(library) = open_library() else {
        println!("criterion 7 SKIP  fixture library not found at {}", store::library_dir().display());
        return;
    };
    let (Some(kummer), Some(rp3)) = (library.get("4-dimensional Kummer variety"), library.get("RP^3 (11 vertices)")) else {
        println!("criterion 7 SKIP  Kummer or RP^3 fixture missing");
        return;
    };
    report(7, "Kummer variety and its blowup", (|| {
        let k = &kummer.complex;
        ensure!(k.f_vector() == [16, 120, 400, 480, 192], "f-vector {:?}", k.f_vector());
        ensure!(euler_characteristic(k) == 8, "chi {}", euler_characteristic(k));
        let h = homology(k);
        let expected = profile(&[(0, &[]), (0, &[]), (6, &[2, 2, 2, 2, 2]), (0, &[]), (1, &[])]);
        ensure!(h == expected, "homology {h}");
        let link = k.link(&[1]).map_err(|e| e.to_string())?;
        let hl = homology(&link);
        ensure!(hl == profile(&[(0, &[]), (0, &[2]), (0, &[]), (1, &[])]), "link homology {hl}");
        ensure!(rp3.complex.f_vector() == [11, 51, 80, 40], "RP^3 fixture f-vector {:?}", rp3.complex.f_vector());
        let opts = ReductionOptions::default();
        let eq = bistellarly_equivalent(&link, &rp3.complex, &opts).map_err(|e| e.to_string())?;
        ensure!(eq.is_equivalent(), "link of vertex 1 not shown equivalent to RP^3");

        let b = blowup(k, 1, &ResolutionBlock::diagonal_complement(), &rp3.complex, &opts).map_err(|e| e.to_string())?;
        let hb = homology(&b.complex);
        ensure!(
            hb.get(2).map(|e| (e.betti, e.torsion.clone())) == Some((7, vec![2, 2, 2, 2])),
            "blowup homology {hb}"
        );
        let chi = euler_characteristic(&b.complex);
        ensure!(chi == 9, "blowup chi {chi}");
        let singular = singular_vertices(&b.complex, &opts).map_err(|e| e.to_string())?;
        ensure!(singular.len() == 15, "{} singular vertices", singular.len());
        ensure!(singular.iter().all(|s| s.link_homology == hl), "a remaining singular link is not RP^3-like");
        Ok(format!("K: {h}; link {hl} ~ RP^3; blowup H2={}, chi=9, 15 singular vertices", hb.entries[2]))
    })());
}

#[test]
fn criterion_8_persistence() {
    let Some(library) = open_library() else {
        println!("criterion 8 SKIP  fixture library not found at {}", store::library_dir().display());
        return;
    };
    report(8, "save/load round trip and strict load", (|| {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        ensure!(!library.entries.is_empty(), "library is empty");
        for entry in &library.entries {
            let original = std::fs::read(&entry.file).map_err(|e| e.to_string())?;
            let doc = store::load_document(&entry.file).map_err(|e| e.to_string())?;
            let copy = dir.path().join(entry.file.file_name().unwrap());
            store::save_document(&doc, &copy).map_err(|e| e.to_string())?;
            let written = std::fs::read(&copy).map_err(|e| e.to_string())?;
            ensure!(written == original, "{}: re-saved bytes differ", entry.name);

            let c = store::load_strict(&copy).map_err(|e| format!("{}: {e}", entry.name))?;
            let mismatches = store::cache_mismatches(&c);
            ensure!(mismatches.is_empty(), "{}: mismatched {mismatches:?}", entry.name);
            let cached = c.cache().snapshot();
            for key in store::VERIFIED_KEYS {
                ensure!(cached.contains_key(key), "{}: `{key}` not cached", entry.name);
            }
            ensure!(c == entry.complex, "{}: complex changed", entry.name);
            let again = dir.path().join("again.json");
            store::save(&c, &again).map_err(|e| e.to_string())?;
            let resaved = store::load_document(&again).map_err(|e| e.to_string())?;
            ensure!(resaved.facets == doc.facets && resaved.labels == doc.labels, "{}: complex drifted", entry.name);
            ensure!(resaved.cached_properties == doc.cached_properties, "{}: cache drifted", entry.name);
        }
        Ok(format!("{} fixtures bit-identical, 0 mismatches", library.entries.len()))
    })());
}

#[test]
fn criterion_9_fundamental_group() {
    let Some(library) = open_library() else {
        println!("criterion 9 SKIP  fixture library not found at {}", store::library_dir().display());
        return;
    };
    report(9, "abelianized fundamental group equals H_1", (|| {
        let mut checked = 0;
        for entry in &library.entries {
            let c = &entry.complex;
            if !c.structural_flags().is_connected {
                continue;
            }
            let p = fundamental_group_presentation(c).map_err(|e| format!("{}: {e}", entry.name))?;
            let ab = abelianization(&p);
            let h1 = homology(c).get(1).cloned().unwrap_or_default();
            ensure!(ab == h1, "{}: abelianization {ab}, H_1 {h1}", entry.name);
            checked += 1;
        }
        ensure!(checked > 0, "no connected fixtures");
        Ok(format!("{checked} connected fixtures agree"))
    })());
}
