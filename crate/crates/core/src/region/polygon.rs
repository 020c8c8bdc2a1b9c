/// Keeps the part of a convex polygon with `a·x + b·y <= c`
/// (Sutherland–Hodgman against one edge). Boundary points are kept; the
/// caller treats the result as the closure of an open set.
pub fn clip_polygon(poly: &[(f64, f64)], a: f64, b: f64, c: f64) -> Vec<(f64, f64)> {
    let side = |p: (f64, f64)| c - (a * p.0 + b * p.1);
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (k, &p) in poly.iter().enumerate() {
        let q = poly[(k + 1) % poly.len()];
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// Signed shoelace area, positive for counterclockwise order.
pub fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|k| {
            let (p, q) = (poly[k], poly[(k + 1) % n]);
            p.0 * q.1 - q.0 * p.1
        })
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_halved() {
        let sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        assert!((polygon_area(&sq) - 1.0).abs() < 1e-15);
        let half = clip_polygon(&sq, 1.0, 1.0, 1.0);
        assert!((polygon_area(&half) - 0.5).abs() < 1e-15);
        assert!(clip_polygon(&sq, 1.0, 0.0, -1.0).is_empty());
    }
}
