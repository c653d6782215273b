//! Small worked instances shared by the test suites and documentation.
//!
//! The fixtures are stored in the text format so they double as parser
//! test data.

use crate::format::parse_rect;
use crate::rect::PartialLatinRectangle;

fn parsed(text: &str) -> PartialLatinRectangle {
    parse_rect(text).expect("fixture parses")
}

/// Saturated rectangle of type (4, 5, 4).
pub fn sat_p_454() -> PartialLatinRectangle {
    parsed("4 5 4\n1 2 3 4 .\n2 4 . 3 1\n. 3 4 1 2\n4 . 1 2 3\n")
}

/// Column/symbol conjugate of [`sat_p_454`], type (4, 4, 5).
pub fn sat_p_454_conj() -> PartialLatinRectangle {
    parsed("4 4 5\n1 2 3 4\n5 1 4 2\n4 5 2 3\n3 4 5 1\n")
}

/// Maximal but unsaturated rectangle of type (4, 5, 4).
pub fn sat_q_454() -> PartialLatinRectangle {
    parsed("4 5 4\n1 2 . . 3\n2 1 . . 4\n. . 3 4 2\n. . 4 3 1\n")
}

/// Column/symbol conjugate of [`sat_q_454`].
pub fn sat_q_454_conj() -> PartialLatinRectangle {
    parsed("4 4 5\n1 2 5 .\n2 1 . 5\n. 5 3 4\n5 . 4 3\n")
}

/// The 17-entry partial latin square of order 5 whose saturated
/// extension types are (5,5,7), (5,6,7), (6,5,7), (6,6,7) plus every
/// type with all components >= 5 and one >= 8.
pub fn embeds_at_8() -> PartialLatinRectangle {
    parsed("5 5 5\n5 . 3 4 2\n. 5 4 2 3\n1 2 5 . .\n2 1 . 5 .\n. . 2 3 4\n")
}

/// A saturated (6, 6, 7) extension of [`embeds_at_8`].
pub fn embeds_at_8_sat_667() -> PartialLatinRectangle {
    parsed("6 6 7\n5 6 3 4 2 1\n7 5 4 2 3 6\n1 2 5 7 6 3\n2 1 6 5 7 4\n6 7 2 3 4 5\n4 3 1 6 5 2\n")
}

/// Order-5 partial square with an empty diagonal; embeds in orders
/// 5, 6, and every order from 9 up.
pub fn empty_diagonal_5() -> PartialLatinRectangle {
    parsed("5 5 5\n. 1 2 3 4\n1 . 3 4 5\n2 3 . 5 1\n3 4 5 . 2\n4 5 1 2 .\n")
}

/// Order-5 partial square holding a 4x4 latin corner; embeds in every
/// order >= 8.
pub fn corner_block_5() -> PartialLatinRectangle {
    parsed("5 5 5\n4 1 2 3 .\n1 2 3 4 .\n2 3 4 1 .\n3 4 1 2 .\n. . . . .\n")
}

/// Order-5 partial square that embeds in every order >= 7.
pub fn embeds_at_7() -> PartialLatinRectangle {
    parsed("5 5 5\n5 . . 1 2\n. 3 4 . 1\n. 4 3 5 .\n1 . 5 2 4\n2 1 . 3 5\n")
}

/// The 6x4 rectangle over 5 symbols whose completion to order 7 is
/// worked through step by step.
pub fn worked_6_4_5() -> PartialLatinRectangle {
    parsed("6 4 5\n1 . 4 5\n. 3 2 .\n4 5 1 2\n3 4 . .\n. 2 5 3\n2 1 3 4\n")
}

/// The 6x7 band obtained from [`worked_6_4_5`] after placing the
/// missing original symbols; every row and column has at most two gaps.
pub fn worked_6_7_band() -> PartialLatinRectangle {
    parsed(
        "6 7 5\n1 . 4 5 2 3 .\n. 3 2 . 4 5 1\n4 5 1 2 . . 3\n3 4 . . 1 2 5\n. 2 5 3 . 1 4\n2 1 3 4 5 . .\n",
    )
}

/// The 6x3 shuffle instance with per-column quota 2 (symbols 0-based
/// over a universe of 6).
pub fn shuffle_6_3() -> Vec<Vec<Option<usize>>> {
    vec![
        vec![Some(1), Some(2), None],
        vec![Some(0), Some(3), Some(5)],
        vec![Some(2), None, None],
        vec![Some(0), Some(1), Some(4)],
        vec![Some(0), Some(5), None],
        vec![Some(4), None, None],
    ]
}

/// The 3x4 frequency rectangle with two classes, each allowed twice per
/// row and column (classes 0-based).
pub fn freq_3_4_grid() -> Vec<Vec<Option<usize>>> {
    vec![
        vec![Some(0), Some(1), Some(0), None],
        vec![None, Some(1), Some(0), Some(1)],
        vec![Some(1), None, Some(1), Some(0)],
    ]
}

/// A displayed completion of [`freq_3_4_grid`] to a frequency square
/// with class multiplicities (2, 2, 1), 0-based classes.
pub fn freq_square_221() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 0, 2, 1],
        vec![2, 1, 0, 1, 0],
        vec![1, 2, 1, 0, 0],
        vec![0, 0, 1, 1, 2],
        vec![1, 0, 2, 0, 1],
    ]
}

/// A displayed completion of [`freq_3_4_grid`] to a frequency square
/// with class multiplicities (2, 3), 0-based classes.
pub fn freq_square_23() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 0, 1, 1],
        vec![0, 1, 0, 1, 1],
        vec![1, 0, 1, 0, 1],
        vec![1, 1, 1, 0, 0],
        vec![1, 0, 1, 1, 0],
    ]
}
