mod common;

use common::{kontsevich, lattice_path_count, to_u64, Polygon};

#[test]
fn wdvv_values() {
    let n: Vec<u64> = kontsevich(5).iter().map(to_u64).collect();
    assert_eq!(n[1..], [1, 1, 12, 620, 87304]);
}

#[test]
fn lattice_paths_agree_with_wdvv() {
    let n = kontsevich(3);
    for d in 1..=3 {
        let (count, _) = lattice_path_count(&Polygon::triangle(d), 0);
        assert_eq!(count, to_u64(&n[d as usize]), "d = {d}");
    }
}

#[test]
fn quartic_paths_include_line_plus_cubic() {
    let n4 = to_u64(&kontsevich(4)[4]);
    let (paths, _) = lattice_path_count(&Polygon::triangle(4), 0);
    let (cubic, _) = lattice_path_count(&Polygon::triangle(3), 1);
    let (line, _) = lattice_path_count(&Polygon::triangle(1), 0);
    assert_eq!(cubic, 1);
    // 11 points: 2 on the line, 9 on the cubic
    assert_eq!(paths, n4 + 55 * cubic * line);
}

#[test]
fn lattice_paths_on_the_hexagon() {
    let (count, _) = lattice_path_count(&Polygon::hexagon(), 0);
    assert_eq!(count, 12);
}
