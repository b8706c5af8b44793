//! Six-type matrix for the tree whose levels alternate between 5 and 6
//! children. F: single frog, sleepers at all children. D: waker and wakee
//! together. B: a frog that has just stepped back.

use frog_core::rational::ratio;

use crate::laurent::{LaurentPoly, TypedMatrix};

pub const PHI6_LABELS: [&str; 6] = ["F5", "D5", "B5", "F6", "D6", "B6"];

/// (row, col, numerator, denominator, exponent of y = e^{-θ})
const PHI6_TERMS: [(usize, usize, i64, i64, i32); 18] = [
    (0, 4, 5, 6, 1),
    (0, 5, 1, 6, -1),
    (1, 3, 5, 36, 1),
    (1, 4, 1, 36, -1),
    (1, 4, 55, 36, 1),
    (1, 5, 5, 18, -1),
    (2, 3, 1, 6, 1),
    (2, 4, 2, 3, 1),
    (2, 5, 1, 6, -1),
    (3, 1, 6, 7, 1),
    (3, 2, 1, 7, -1),
    (4, 0, 6, 49, 1),
    (4, 1, 1, 49, -1),
    (4, 1, 78, 49, 1),
    (4, 2, 12, 49, -1),
    (5, 0, 1, 7, 1),
    (5, 1, 5, 7, 1),
    (5, 2, 1, 7, -1),
];

pub fn phi6_matrix() -> TypedMatrix {
    let mut entries = vec![vec![LaurentPoly::zero(); 6]; 6];
    for (i, j, p, q, e) in PHI6_TERMS {
        entries[i][j].add_term(ratio(p, q), e);
    }
    TypedMatrix {
        id: "phi6".into(),
        labels: PHI6_LABELS.iter().map(|s| s.to_string()).collect(),
        entries,
    }
}
