//! Small built-in matrices and words used by tests, examples and the CLI.

use crate::algebra::{CommutatorMatrix, Modulus};

fn z2(rows: &[Vec<i64>], labels: &[&str]) -> CommutatorMatrix {
    CommutatorMatrix::new(
        rows,
        Modulus::new(2).expect("2 is a modulus"),
        Some(labels.iter().map(|s| s.to_string()).collect()),
    )
    .expect("fixture matrices are valid")
}

/// Four generators where `a`,`d` and `b`,`c` anticommute: a 4-cycle of
/// commuting pairs.
pub fn square() -> CommutatorMatrix {
    z2(
        &[
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
        ],
        &["a", "b", "c", "d"],
    )
}

/// Commuting pairs form the path `b - a - c - d`.
pub fn path() -> CommutatorMatrix {
    z2(
        &[
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 1],
            vec![0, 1, 0, 0],
            vec![1, 1, 0, 0],
        ],
        &["a", "b", "c", "d"],
    )
}

/// Commuting pairs `a-b`, `a-c`; `d` commutes with nothing else.
pub fn cherry() -> CommutatorMatrix {
    z2(
        &[
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 1],
            vec![0, 1, 0, 1],
            vec![1, 1, 1, 0],
        ],
        &["a", "b", "c", "d"],
    )
}

pub const SQUARE_WORD: &str = "abdccabd";
pub const SQUARE_BRACKETING: &str = "((ab)(dc))((ca)(bd))";
pub const PATH_WORD: &str = "bdccaabd";
pub const PATH_BRACKETING: &str = "(b(dc))((ca)((ab)d))";
pub const CHERRY_WORD: &str = "dcabbadc";
pub const CHERRY_BRACKETING: &str = "(d(ca))(b(((ba)d)c))";

/// `(matrix, word, bracketing)` for the three four-generator examples, each
/// contextual with phase 1.
pub fn paper_examples() -> Vec<(CommutatorMatrix, &'static str, &'static str)> {
    vec![
        (square(), SQUARE_WORD, SQUARE_BRACKETING),
        (path(), PATH_WORD, PATH_BRACKETING),
        (cherry(), CHERRY_WORD, CHERRY_BRACKETING),
    ]
}

/// Two anticommuting qubit observables, doubled: generators `x1 y1 x2 y2`.
pub fn peres_mermin() -> CommutatorMatrix {
    z2(&[vec![0, 1], vec![1, 0]], &["x", "y"]).tensor_double()
}

pub const PERES_MERMIN_BRACKETING: &str = "((x1y2)(y1x2))((x1x2)(y1y2))";

/// The five-generator matrix over `Z_4` with generators `a1 a2 b c d`.
pub fn splitting_matrix() -> CommutatorMatrix {
    CommutatorMatrix::new(
        &[
            vec![0, 0, 1, 1, 1],
            vec![0, 0, 3, 3, 1],
            vec![3, 1, 0, 2, 0],
            vec![3, 1, 2, 0, 0],
            vec![3, 3, 0, 0, 0],
        ],
        Modulus::new(4).expect("4 is a modulus"),
        Some(["a1", "a2", "b", "c", "d"].map(String::from).to_vec()),
    )
    .expect("fixture matrix is valid")
}

pub const SPLITTING_BRACKETING: &str = "[((a1a2)b)(cd)][((a1a2)c)(bd)][a1^2a2^2b^2c^2d^2]";
