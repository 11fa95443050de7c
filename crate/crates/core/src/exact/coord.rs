use core::fmt;

use super::{ExactMatrix, Q};

/// Which matrix of the pair `(X, Y)` an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    X,
    Y,
}

/// An entry coordinate `x_ij` or `y_ij`, 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub tag: Tag,
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub const fn x(row: usize, col: usize) -> Self {
        Coord { tag: Tag::X, row, col }
    }

    pub const fn y(row: usize, col: usize) -> Self {
        Coord { tag: Tag::Y, row, col }
    }

    /// Position in the dense ordering `x_11..x_nn, y_11..y_nn`.
    pub fn index(self, n: usize) -> usize {
        let base = match self.tag {
            Tag::X => 0,
            Tag::Y => n * n,
        };
        base + (self.row - 1) * n + (self.col - 1)
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        let tag = if index < n * n { Tag::X } else { Tag::Y };
        let local = index % (n * n);
        Coord { tag, row: local / n + 1, col: local % n + 1 }
    }

    /// All `2n^2` coordinates in dense order.
    pub fn all(n: usize) -> impl Iterator<Item = Coord> {
        (0..2 * n * n).map(move |i| Coord::from_index(i, n))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.tag {
            Tag::X => 'x',
            Tag::Y => 'y',
        };
        write!(f, "{t}{},{}", self.row, self.col)
    }
}

/// A rational point `(X, Y)` of `Mat_n x Mat_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: ExactMatrix<Q>,
    pub y: ExactMatrix<Q>,
}

impl Point {
    pub fn new(x: ExactMatrix<Q>, y: ExactMatrix<Q>) -> Self {
        assert!(x.is_square() && y.is_square() && x.rows() == y.rows());
        Point { x, y }
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn get(&self, c: Coord) -> &Q {
        match c.tag {
            Tag::X => self.x.entry(c.row, c.col),
            Tag::Y => self.y.entry(c.row, c.col),
        }
    }

    pub fn set(&mut self, c: Coord, v: Q) {
        match c.tag {
            Tag::X => self.x.set_entry(c.row, c.col, v),
            Tag::Y => self.y.set_entry(c.row, c.col, v),
        }
    }

    /// Apply `(X, Y) -> (T1 X T2, T1 Y T2)` for diagonal `T1 = diag(left)`,
    /// `T2 = diag(right)`.
    pub fn scaled(&self, row_scale: &[Q], col_scale: &[Q]) -> Point {
        let n = self.n();
        let f = |m: &ExactMatrix<Q>| {
            ExactMatrix::from_fn(n, n, |i, j| m.entry(i, j) * &row_scale[i - 1] * &col_scale[j - 1])
        };
        Point { x: f(&self.x), y: f(&self.y) }
    }
}
