use crate::metrics::Point;
use crate::scalar::Scalar;

/// Fast non-dominated sort. Returns fronts of indices, best front first;
/// indices inside a front are ascending.
pub fn nondominated_sort<F: Scalar>(points: &[Point<F>]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dom_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if points[i].dominates(&points[j]) {
                dominated_by_me[i].push(j);
                dom_count[j] += 1;
            } else if points[j].dominates(&points[i]) {
                dominated_by_me[j].push(i);
                dom_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dom_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                dom_count[j] -= 1;
                if dom_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of `front` (same order). Boundary
/// members of either objective get infinity.
pub fn crowding_distance<F: Scalar>(points: &[Point<F>], front: &[usize]) -> Vec<F> {
    let k = front.len();
    let mut dist = vec![F::zero(); k];
    if k <= 2 {
        return vec![F::infinity(); k];
    }
    let objectives: [fn(&Point<F>) -> F; 2] = [|p| p.time, |p| p.profit];
    for obj in objectives {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| {
            obj(&points[front[a]])
                .partial_cmp(&obj(&points[front[b]]))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let lo = obj(&points[front[order[0]]]);
        let hi = obj(&points[front[order[k - 1]]]);
        dist[order[0]] = F::infinity();
        dist[order[k - 1]] = F::infinity();
        let range = hi - lo;
        if !(range > F::zero()) {
            continue;
        }
        for w in 1..k - 1 {
            let prev = obj(&points[front[order[w - 1]]]);
            let next = obj(&points[front[order[w + 1]]]);
            dist[order[w]] = dist[order[w]] + (next - prev) / range;
        }
    }
    dist
}

/// Rank (0 = first front) and crowding distance for every point.
pub fn rank_and_crowding<F: Scalar>(points: &[Point<F>]) -> (Vec<usize>, Vec<F>) {
    let mut rank = vec![0; points.len()];
    let mut crowd = vec![F::zero(); points.len()];
    for (r, front) in nondominated_sort(points).iter().enumerate() {
        let d = crowding_distance(points, front);
        for (pos, &i) in front.iter().enumerate() {
            rank[i] = r;
            crowd[i] = d[pos];
        }
    }
    (rank, crowd)
}

/// Environmental selection: whole fronts while they fit, then the most
/// crowded-apart members of the splitting front. Returns selected indices
/// in ascending order.
pub fn select_survivors<F: Scalar>(points: &[Point<F>], keep: usize) -> Vec<usize> {
    if points.len() <= keep {
        return (0..points.len()).collect();
    }
    let mut chosen = Vec::with_capacity(keep);
    for front in nondominated_sort(points) {
        if chosen.len() + front.len() <= keep {
            chosen.extend_from_slice(&front);
            if chosen.len() == keep {
                break;
            }
            continue;
        }
        let d = crowding_distance(points, &front);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| {
            d[b].partial_cmp(&d[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(front[a].cmp(&front[b]))
        });
        let room = keep - chosen.len();
        chosen.extend(order[..room].iter().map(|&o| front[o]));
        break;
    }
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point<f64>> {
        v.iter().map(|&(t, g)| Point::new(t, g)).collect()
    }

    #[test]
    fn tradeoff_pair_shares_front() {
        let f = nondominated_sort(&pts(&[(1.0, 1.0), (2.0, 2.0)]));
        assert_eq!(f, vec![vec![0, 1]]);
    }

    #[test]
    fn four_points_against_pairwise_oracle() {
        let p = pts(&[(1.0, 2.0), (2.0, 1.0), (2.0, 2.0), (3.0, 0.5)]);
        let fronts = nondominated_sort(&p);
        // oracle: front of i = 1 + max front of its dominators
        let mut level = vec![0usize; p.len()];
        for _ in 0..p.len() {
            for i in 0..p.len() {
                for j in 0..p.len() {
                    if p[j].dominates(&p[i]) {
                        level[i] = level[i].max(level[j] + 1);
                    }
                }
            }
        }
        for (r, front) in fronts.iter().enumerate() {
            for &i in front {
                assert_eq!(level[i], r);
            }
        }
        assert_eq!(fronts, vec![vec![0], vec![2], vec![1], vec![3]]);
    }

    #[test]
    fn crowding_boundaries_infinite() {
        let p = pts(&[(1.0, 1.0), (2.0, 3.0), (4.0, 4.0), (5.0, 8.0)]);
        let d = crowding_distance(&p, &[0, 1, 2, 3]);
        assert!(d[0].is_infinite() && d[3].is_infinite());
        assert!((d[1] - ((4.0 - 1.0) / 4.0 + (4.0 - 1.0) / 7.0)).abs() < 1e-12);
        assert!((d[2] - ((5.0 - 2.0) / 4.0 + (8.0 - 3.0) / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn survivors_are_never_dominated_by_discarded() {
        let p = pts(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (2.5, 1.0), (4.0, 2.0), (1.5, 0.5)]);
        for keep in 1..p.len() {
            let kept = select_survivors(&p, keep);
            assert_eq!(kept.len(), keep);
            for d in (0..p.len()).filter(|i| !kept.contains(i)) {
                for &k in &kept {
                    assert!(!p[d].dominates(&p[k]));
                }
            }
        }
    }
}
