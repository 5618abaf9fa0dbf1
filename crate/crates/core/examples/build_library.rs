//! Regenerates the fixture library: `cargo run --example build_library [DIR]`.

use std::path::PathBuf;

use serde_json::Value;
use simplicia::bistellar::{reduce, ReductionOptions};
use simplicia::blowup::ResolutionBlock;
use simplicia::generators::{boundary_simplex, cross_polytope, cyclic_polytope_boundary, kummer_variety};
use simplicia::kernel::cartesian_product;
use simplicia::store::{fill_cache, save_document, ComplexDocument};
use simplicia::Complex;

fn main() -> simplicia::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("library"));
    std::fs::create_dir_all(&dir)?;

    let mut fixtures: Vec<(String, Complex, String, &str)> = Vec::new();
    for d in 3..=5 {
        let c = boundary_simplex(d)?;
        let name = format!("boundary of the {d}-simplex");
        fixtures.push((
            format!("bdsimplex_{d}"),
            c.with_name(name),
            format!("S^{}", d - 1),
            "generated: all d-subsets of {1..d+1}",
        ));
    }
    fixtures.push((
        "cross_3".into(),
        cross_polytope(3)?.with_name("octahedron (boundary of the 3-dimensional cross polytope)"),
        "S^2".into(),
        "generated: one vertex from each antipodal pair",
    ));
    fixtures.push((
        "cross_4".into(),
        cross_polytope(4)?.with_name("boundary of the 4-dimensional cross polytope"),
        "S^3".into(),
        "generated: one vertex from each antipodal pair",
    ));
    fixtures.push((
        "cyclic_4_10".into(),
        cyclic_polytope_boundary(4, 10)?.with_name("boundary of the cyclic 4-polytope with 10 vertices"),
        "S^3".into(),
        "generated: Gale's evenness condition",
    ));
    let rp2 = Complex::from_facets(
        &[
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![1, 5, 6],
            vec![1, 2, 6],
            vec![2, 3, 5],
            vec![3, 4, 6],
            vec![2, 4, 5],
            vec![2, 4, 6],
            vec![3, 5, 6],
        ],
        None,
    )?;
    fixtures.push((
        "rp2_6".into(),
        rp2.with_name("RP^2 (6 vertices)"),
        "RP^2".into(),
        "hemi-icosahedron: antipodal quotient of the boundary of the icosahedron",
    ));
    let triangle = boundary_simplex(2)?;
    fixtures.push((
        "torus_9".into(),
        cartesian_product(&triangle, &triangle)?.with_name("T^2 (9 vertices)"),
        "T^2".into(),
        "staircase triangulation of the product of two triangle boundaries",
    ));
    fixtures.push((
        "kummer_16".into(),
        kummer_variety(),
        "Kummer variety K^4 (16 ordinary double points)".into(),
        "Freudenthal triangulation of the 4-cube with coordinates mod 2 (16 vertices, 192 facets)",
    ));
    let block = ResolutionBlock::diagonal_complement();
    let reduced = reduce(&block.block.boundary()?, &ReductionOptions::default().with_rounds(20_000))?;
    if reduced.complex.f_vector() != [11, 51, 80, 40] {
        return Err(simplicia::Error::InvalidArgument("RP^3 reduction did not reach 11 vertices".into()));
    }
    let rp3 = Complex::from_facets(&reduced.complex.facet_lists(), None)?;
    fixtures.push((
        "rp3_11".into(),
        rp3.with_name("RP^3 (11 vertices)"),
        "RP^3".into(),
        "bistellar reduction (seed 0) of the boundary of the resolution block",
    ));
    let block_name = block.block.name().unwrap_or("resolution block").to_string();
    fixtures.push((
        "resolution_block".into(),
        block.block.clone().with_name(block_name),
        "S^2 x S^2 minus an open neighbourhood of the diagonal".into(),
        "staircase S^2 x S^2 on two tetrahedron boundaries, cut along the diagonal",
    ));

    for (file, c, kind, provenance) in fixtures {
        fill_cache(&c);
        c.cache().publish("topological_type", Value::from(kind));
        let doc = ComplexDocument::from_complex(&c).with_provenance(provenance);
        let path = dir.join(format!("{file}.json"));
        save_document(&doc, &path)?;
        println!("{} {:?}", path.display(), c.f_vector());
    }
    Ok(())
}
