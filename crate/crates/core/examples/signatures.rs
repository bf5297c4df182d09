//! List the 36 motif signatures with their labels and the counter cells
//! that feed each one.
//!
//!     cargo run --example signatures

use std::collections::BTreeMap;

use fastmotif::taxonomy::{
    label_for_signature, pair_cell_signature, star_cell_signature, tri_cell_signature, valid_signatures, Direction,
    MotifSignature, PairCounter, StarCounter, TriCounter,
};

fn dirs(d: [Direction; 3]) -> String {
    d.map(Direction::as_str).join(",")
}

fn main() {
    let mut cells: BTreeMap<MotifSignature, Vec<String>> = BTreeMap::new();
    for (ty, d, _) in StarCounter::new().iter() {
        cells.entry(star_cell_signature(ty, d)).or_default().push(format!("Star[{ty:?},{}]", dirs(d)));
    }
    for (d, _) in PairCounter::new().iter() {
        cells.entry(pair_cell_signature(d)).or_default().push(format!("Pair[{}]", dirs(d)));
    }
    for (ty, d, _) in TriCounter::new().iter() {
        cells.entry(tri_cell_signature(ty, d)).or_default().push(format!("Tri[{ty:?},{}]", dirs(d)));
    }

    for sig in valid_signatures() {
        println!(
            "{sig}  {:<8} {:<9} {}",
            label_for_signature(*sig),
            sig.class().as_str(),
            cells[sig].join("  ")
        );
    }

    // Node names do not matter, only their order of first appearance.
    let sig = fastmotif::taxonomy::canonical_signature(&[("x", "y"), ("z", "x"), ("y", "z")]).unwrap();
    println!("\nx->y, z->x, y->z  is  {sig} ({})", label_for_signature(sig));
}
