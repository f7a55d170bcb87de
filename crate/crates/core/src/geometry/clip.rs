//! Clipping of polygons and segments against convex regions and simple loops.

use super::{orient, point_in_loop, Point};

/// Sutherland–Hodgman: part of `subject` inside the convex counterclockwise
/// loop `clip`. The subject may be non-convex; the result then can contain
/// zero-width bridges, which leave the area unchanged.
pub fn clip_to_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut out = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let (a, b) = (clip[i], clip[(i + 1) % n]);
        let input = std::mem::take(&mut out);
        let m = input.len();
        for k in 0..m {
            let (p, q) = (input[k], input[(k + 1) % m]);
            let (dp, dq) = (orient(a, b, p), orient(a, b, q));
            if dp >= 0.0 {
                out.push(p);
            }
            if (dp >= 0.0) != (dq >= 0.0) {
                out.push(p.lerp(q, dp / (dp - dq)));
            }
        }
    }
    out
}

/// Cyrus–Beck: parameter interval of segment `[a, b]` inside the convex
/// counterclockwise loop `clip`, if nonempty.
pub fn segment_in_convex(a: Point, b: Point, clip: &[Point]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let n = clip.len();
    for i in 0..n {
        let (c, d) = (clip[i], clip[(i + 1) % n]);
        // inside means orient(c, d, x) >= 0, linear in the segment parameter
        let fa = orient(c, d, a);
        let fb = orient(c, d, b);
        if fa < 0.0 && fb < 0.0 {
            return None;
        }
        if fa < 0.0 {
            lo = lo.max(fa / (fa - fb));
        } else if fb < 0.0 {
            hi = hi.min(fa / (fa - fb));
        }
        if lo >= hi {
            return None;
        }
    }
    Some((lo, hi))
}

/// Length of the part of segment `[a, b]` strictly inside the simple loop.
pub fn segment_length_inside(a: Point, b: Point, loop_: &[Point]) -> f64 {
    let n = loop_.len();
    let mut cuts = vec![0.0, 1.0];
    let ab = b - a;
    for i in 0..n {
        let (c, d) = (loop_[i], loop_[(i + 1) % n]);
        let cd = d - c;
        let den = ab.cross(cd);
        if den == 0.0 {
            continue;
        }
        let s = (c - a).cross(cd) / den;
        let u = (c - a).cross(ab) / den;
        if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u) {
            cuts.push(s);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let len = ab.norm();
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .filter(|w| point_in_loop(loop_, a.lerp(b, 0.5 * (w[0] + w[1]))))
        .map(|w| (w[1] - w[0]) * len)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::signed_area;
    use approx::assert_relative_eq;

    fn square(x0: f64, y0: f64, s: f64) -> Vec<Point> {
        vec![
            Point::new(x0, y0),
            Point::new(x0 + s, y0),
            Point::new(x0 + s, y0 + s),
            Point::new(x0, y0 + s),
        ]
    }

    #[test]
    fn overlapping_squares() {
        let c = clip_to_convex(&square(0.0, 0.0, 1.0), &square(0.5, 0.5, 1.0));
        assert_relative_eq!(signed_area(&c), 0.25, epsilon = 1e-15);
        assert!(clip_to_convex(&square(0.0, 0.0, 1.0), &square(2.0, 2.0, 1.0)).len() < 3);
    }

    #[test]
    fn nonconvex_subject_area() {
        // L-shape of area 3
        let l = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(0.0, 2.0),
        ];
        let c = clip_to_convex(&l, &square(0.5, 0.5, 2.0));
        // [0.5,2]x[0.5,1] plus [0.5,1]x[1,2]
        assert_relative_eq!(signed_area(&c), 0.75 + 0.5, epsilon = 1e-14);
    }

    #[test]
    fn segment_clipping() {
        let sq = square(0.0, 0.0, 1.0);
        let (lo, hi) = segment_in_convex(Point::new(-1.0, 0.5), Point::new(3.0, 0.5), &sq).unwrap();
        assert_relative_eq!(lo, 0.25);
        assert_relative_eq!(hi, 0.5);
        assert!(segment_in_convex(Point::new(-1.0, 2.0), Point::new(3.0, 2.0), &sq).is_none());
        assert_relative_eq!(
            segment_length_inside(Point::new(-1.0, 0.5), Point::new(3.0, 0.5), &sq),
            1.0,
            epsilon = 1e-15
        );
    }
}
