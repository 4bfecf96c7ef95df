//! Sign-exact geometric predicates.
//!
//! Orientation uses adaptive-precision arithmetic from the `robust` crate.
//! The remaining predicates evaluate in floating point first and fall back to
//! exact rational arithmetic when the result is within the rounding error
//! bound, so every sign they return is the sign of the exact expression over
//! the input doubles.

use std::cmp::Ordering;

use num::{BigRational, Signed, Zero};

pub type Point2 = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Collinear,
}

/// Orientation of the triple `(a, b, c)`: the sign of `(b - a) x (c - a)`.
#[inline]
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> Orientation {
    let det = robust::orient2d(
        robust::Coord { x: a[0], y: a[1] },
        robust::Coord { x: b[0], y: b[1] },
        robust::Coord { x: c[0], y: c[1] },
    );
    if det > 0.0 {
        Orientation::CounterClockwise
    } else if det < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// A direction vector kept in difference form `(x1 - x0, y1 - y0)`, so that
/// edge vectors and edge normals built from input points stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dir {
    pub x1: f64,
    pub x0: f64,
    pub y1: f64,
    pub y0: f64,
}

impl Dir {
    pub fn vec(x: f64, y: f64) -> Dir {
        Dir {
            x1: x,
            x0: 0.0,
            y1: y,
            y0: 0.0,
        }
    }

    /// The vector `b - a`.
    pub fn edge(a: Point2, b: Point2) -> Dir {
        Dir {
            x1: b[0],
            x0: a[0],
            y1: b[1],
            y0: a[1],
        }
    }

    /// Left normal of the edge `a -> b`; outward for clockwise polygons.
    pub fn normal(a: Point2, b: Point2) -> Dir {
        Dir::edge(a, b).left_perp()
    }

    /// `(x, y) -> (-y, x)`
    pub fn left_perp(self) -> Dir {
        Dir {
            x1: self.y0,
            x0: self.y1,
            y1: self.x1,
            y0: self.x0,
        }
    }

    /// `(x, y) -> (y, -x)`
    pub fn right_perp(self) -> Dir {
        self.left_perp().neg()
    }

    pub fn neg(self) -> Dir {
        Dir {
            x1: self.x0,
            x0: self.x1,
            y1: self.y0,
            y0: self.y1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x1 == self.x0 && self.y1 == self.y0
    }

    pub fn approx(&self) -> [f64; 2] {
        [self.x1 - self.x0, self.y1 - self.y0]
    }

    /// Exact sign of the x component.
    pub fn sign_x(&self) -> Ordering {
        self.x1.partial_cmp(&self.x0).unwrap_or(Ordering::Equal)
    }

    /// Exact sign of the y component.
    pub fn sign_y(&self) -> Ordering {
        self.y1.partial_cmp(&self.y0).unwrap_or(Ordering::Equal)
    }

    fn exact(&self) -> (BigRational, BigRational) {
        (q(self.x1) - q(self.x0), q(self.y1) - q(self.y0))
    }

    fn magnitude(&self) -> (f64, f64) {
        (
            self.x1.abs() + self.x0.abs(),
            self.y1.abs() + self.y0.abs(),
        )
    }
}

fn q(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coordinate")
}

fn sign_of(v: &BigRational) -> Ordering {
    if v.is_zero() {
        Ordering::Equal
    } else if v.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

const ERR_FACTOR: f64 = 1e-14;

#[inline]
fn filtered(approx: f64, magnitude: f64, exact: impl FnOnce() -> BigRational) -> Ordering {
    let bound = ERR_FACTOR * magnitude;
    if approx > bound {
        Ordering::Greater
    } else if approx < -bound {
        Ordering::Less
    } else {
        sign_of(&exact())
    }
}

/// Compares `d . p` with `d . q`.
pub fn dot_cmp(d: &Dir, p: Point2, r: Point2) -> Ordering {
    let [dx, dy] = d.approx();
    let approx = dx * (p[0] - r[0]) + dy * (p[1] - r[1]);
    let (mx, my) = d.magnitude();
    let mag = mx * (p[0].abs() + r[0].abs()) + my * (p[1].abs() + r[1].abs());
    filtered(approx, mag, || {
        let (ex, ey) = d.exact();
        ex * (q(p[0]) - q(r[0])) + ey * (q(p[1]) - q(r[1]))
    })
}

/// Sign of the cross product `u x v`; `Less` means `v` is clockwise of `u`.
pub fn cross_sign(u: &Dir, v: &Dir) -> Ordering {
    let [ux, uy] = u.approx();
    let [vx, vy] = v.approx();
    let approx = ux * vy - uy * vx;
    let (mux, muy) = u.magnitude();
    let (mvx, mvy) = v.magnitude();
    let mag = mux * mvy + muy * mvx;
    filtered(approx, mag, || {
        let (ax, ay) = u.exact();
        let (bx, by) = v.exact();
        ax * by - ay * bx
    })
}

/// Which side of the directed line through `p` with direction `d` the point
/// `x` lies on: `Greater` = left, `Less` = right, `Equal` = on the line.
pub fn line_side(p: Point2, d: &Dir, x: Point2) -> Ordering {
    cross_sign(d, &Dir::edge(p, x))
}

/// Compares `|a - c|^2` with `|b - c|^2`.
pub fn dist2_cmp(c: Point2, a: Point2, b: Point2) -> Ordering {
    let d2 = |p: Point2| {
        let dx = p[0] - c[0];
        let dy = p[1] - c[1];
        dx * dx + dy * dy
    };
    let approx = d2(a) - d2(b);
    let m = |p: Point2| {
        let dx = p[0].abs() + c[0].abs();
        let dy = p[1].abs() + c[1].abs();
        dx * dx + dy * dy
    };
    filtered(approx, m(a) + m(b), || {
        let cx = q(c[0]);
        let cy = q(c[1]);
        let e2 = |p: Point2| {
            let dx = q(p[0]) - &cx;
            let dy = q(p[1]) - &cy;
            &dx * &dx + &dy * &dy
        };
        e2(a) - e2(b)
    })
}

/// Sign of `(x - p) . (x - q)`; `Less` means `x` lies strictly inside the
/// open disk with diameter `pq`.
pub fn diametral_sign(p: Point2, r: Point2, x: Point2) -> Ordering {
    let approx = (x[0] - p[0]) * (x[0] - r[0]) + (x[1] - p[1]) * (x[1] - r[1]);
    let mag = (x[0].abs() + p[0].abs()) * (x[0].abs() + r[0].abs())
        + (x[1].abs() + p[1].abs()) * (x[1].abs() + r[1].abs());
    filtered(approx, mag, || {
        let (xx, xy) = (q(x[0]), q(x[1]));
        (&xx - q(p[0])) * (&xx - q(r[0])) + (&xy - q(p[1])) * (&xy - q(r[1]))
    })
}

/// Lexicographic comparison of `(x, y)`.
#[inline]
pub fn lex_cmp(a: Point2, b: Point2) -> Ordering {
    a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]))
}

#[inline]
pub fn dist(a: Point2, b: Point2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[inline]
pub fn dist2(a: Point2, b: Point2) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn orientation_examples() {
        assert_eq!(
            orient2d([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]),
            Orientation::CounterClockwise
        );
        assert_eq!(
            orient2d([0.0, 0.0], [1.0, 0.0], [2.0, 0.0]),
            Orientation::Collinear
        );
        assert_eq!(
            orient2d([0.0, 0.0], [0.0, 1.0], [1.0, 0.0]),
            Orientation::Clockwise
        );
    }

    #[test]
    fn near_degenerate_orientation_is_exact() {
        // Points on the line y = x perturbed by one ulp.
        let a = [0.5, 0.5];
        let b = [12.0, 12.0];
        let c = [24.0, 24.0];
        assert_eq!(orient2d(a, b, c), Orientation::Collinear);
        let c_up = [24.0, f64::from_bits(24.0f64.to_bits() + 1)];
        assert_eq!(orient2d(a, b, c_up), Orientation::CounterClockwise);
    }

    #[test]
    fn exact_fallbacks() {
        let d = Dir::vec(1.0, 1.0);
        assert_eq!(dot_cmp(&d, [0.1, 0.2], [0.2, 0.1]), Ordering::Equal);
        let tiny = f64::from_bits(0.1f64.to_bits() + 1);
        assert_eq!(dot_cmp(&d, [tiny, 0.2], [0.2, 0.1]), Ordering::Greater);
        assert_eq!(
            dist2_cmp([0.0, 0.0], [0.3, 0.4], [0.4, 0.3]),
            Ordering::Equal
        );
        // (0,1) lies on the circle with diameter (-1,0)-(1,0).
        assert_eq!(
            diametral_sign([-1.0, 0.0], [1.0, 0.0], [0.0, 1.0]),
            Ordering::Equal
        );
        assert_eq!(
            diametral_sign([-1.0, 0.0], [1.0, 0.0], [0.0, 0.5]),
            Ordering::Less
        );
    }

    #[test]
    fn normals_and_sides() {
        let n = Dir::normal([0.0, 0.0], [1.0, 0.0]);
        assert_eq!(n.approx(), [0.0, 1.0]);
        let up = Dir::vec(0.0, 1.0);
        assert_eq!(line_side([0.0, 0.0], &up, [-1.0, 3.0]), Ordering::Greater);
        assert_eq!(line_side([0.0, 0.0], &up, [1.0, 3.0]), Ordering::Less);
        assert_eq!(line_side([0.0, 0.0], &up, [0.0, -3.0]), Ordering::Equal);
    }

    proptest! {
        #[test]
        fn orientation_antisymmetric_and_translation_invariant(
            a in proptest::array::uniform2(-1000i32..1000),
            b in proptest::array::uniform2(-1000i32..1000),
            c in proptest::array::uniform2(-1000i32..1000),
            t in proptest::array::uniform2(-100000i32..100000),
        ) {
            let f = |p: [i32; 2]| [p[0] as f64, p[1] as f64];
            let g = |p: [i32; 2]| [(p[0] + t[0]) as f64, (p[1] + t[1]) as f64];
            let o = orient2d(f(a), f(b), f(c));
            let swapped = orient2d(f(a), f(c), f(b));
            let expect = match o {
                Orientation::Clockwise => Orientation::CounterClockwise,
                Orientation::CounterClockwise => Orientation::Clockwise,
                Orientation::Collinear => Orientation::Collinear,
            };
            prop_assert_eq!(swapped, expect);
            prop_assert_eq!(orient2d(g(a), g(b), g(c)), o);
        }

        #[test]
        fn cross_sign_matches_integer_arithmetic(
            u in proptest::array::uniform4(-1000i32..1000),
            v in proptest::array::uniform4(-1000i32..1000),
        ) {
            let du = Dir { x1: u[0] as f64, x0: u[1] as f64, y1: u[2] as f64, y0: u[3] as f64 };
            let dv = Dir { x1: v[0] as f64, x0: v[1] as f64, y1: v[2] as f64, y0: v[3] as f64 };
            let ux = (u[0] - u[1]) as i64;
            let uy = (u[2] - u[3]) as i64;
            let vx = (v[0] - v[1]) as i64;
            let vy = (v[2] - v[3]) as i64;
            prop_assert_eq!(cross_sign(&du, &dv), (ux * vy - uy * vx).cmp(&0));
        }
    }
}
