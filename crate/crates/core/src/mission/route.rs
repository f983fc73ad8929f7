//! Per-vehicle planned path as a polyline, with a cursor marking the next node
//! the vehicle has yet to reach.

use super::types::{MissionPlan, Waypoint};

const ON_LEG_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RouteNode {
    pub at: Waypoint,
    /// Index into the plan's objective list; `None` for the launch point and
    /// for diversion anchors.
    pub objective: Option<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct Route {
    nodes: Vec<RouteNode>,
    /// cum[i] = path length from nodes[0] to nodes[i]
    cum: Vec<f64>,
    /// Index of the next node to reach; nodes[cursor - 1] starts the current leg.
    cursor: usize,
}

/// Distance from `p` to segment `a`-`b`, and the clamped fraction along it.
pub(crate) fn project(p: Waypoint, a: Waypoint, b: Waypoint) -> (f64, f64) {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return (p.distance(&a), 1.0);
    }
    let f = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    let q = Waypoint::new(a.x + f * dx, a.y + f * dy);
    (p.distance(&q), f)
}

impl Route {
    /// Launch point (plan origin) followed by every waypoint of the vehicle's
    /// objectives in plan order.
    pub fn build(plan: &MissionPlan, vehicle_id: &str) -> Self {
        let mut nodes = vec![RouteNode {
            at: Waypoint::ORIGIN,
            objective: None,
        }];
        for (i, o) in plan.objectives_for(vehicle_id) {
            nodes.extend(o.waypoints.iter().map(|w| RouteNode {
                at: *w,
                objective: Some(i),
            }));
        }
        let mut route = Route {
            nodes,
            cum: Vec::new(),
            cursor: 1,
        };
        route.recompute();
        route
    }

    fn recompute(&mut self) {
        self.cum.clear();
        let mut acc = 0.0;
        for (i, n) in self.nodes.iter().enumerate() {
            if i > 0 {
                acc += self.nodes[i - 1].at.distance(&n.at);
            }
            self.cum.push(acc);
        }
    }

    pub fn total(&self) -> f64 {
        *self.cum.last().unwrap_or(&0.0)
    }

    pub fn is_done(&self) -> bool {
        self.cursor >= self.nodes.len()
    }

    #[cfg(test)]
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn traversed(&self, pos: Option<Waypoint>) -> f64 {
        if self.is_done() {
            return self.total();
        }
        let base = self.cum[self.cursor - 1];
        match pos {
            None => base,
            Some(p) => {
                let a = self.nodes[self.cursor - 1].at;
                let b = self.nodes[self.cursor].at;
                let (_, f) = project(p, a, b);
                base + f * a.distance(&b)
            }
        }
    }

    pub fn first_node_of(&self, objective: usize) -> Option<usize> {
        self.nodes.iter().position(|n| n.objective == Some(objective))
    }

    pub fn last_node_of(&self, objective: usize) -> Option<usize> {
        self.nodes.iter().rposition(|n| n.objective == Some(objective))
    }

    /// Index of the first not-yet-reached node within `radius` of `point`.
    pub fn node_near(&self, point: Waypoint, radius: f64) -> Option<usize> {
        (self.cursor..self.nodes.len()).find(|&i| self.nodes[i].at.distance(&point) <= radius)
    }

    pub fn is_passed(&self, node: usize) -> bool {
        node < self.cursor
    }

    /// Remaining along-path distance from `pos` to `node`; `None` once passed.
    pub fn remaining_to(&self, pos: Waypoint, node: usize) -> Option<f64> {
        if node < self.cursor || node >= self.nodes.len() {
            return None;
        }
        Some(pos.distance(&self.nodes[self.cursor].at) + self.cum[node] - self.cum[self.cursor])
    }

    /// Move the cursor forward to the leg `pos` lies on. Never moves backward
    /// and never looks past the active objective's last node.
    pub fn advance(&mut self, pos: Waypoint, active: Option<usize>) {
        if self.is_done() {
            return;
        }
        let limit = active
            .and_then(|a| self.last_node_of(a))
            .filter(|&l| l >= self.cursor)
            .unwrap_or(self.nodes.len() - 1);
        let mut best = (f64::INFINITY, self.cursor);
        for i in self.cursor..=limit {
            let (d, _) = project(pos, self.nodes[i - 1].at, self.nodes[i].at);
            if d < ON_LEG_EPS {
                best = (d, i);
                break;
            }
            if d < best.0 {
                best = (d, i);
            }
        }
        self.cursor = best.1;
    }

    /// Marks every node of `objective` as reached.
    pub fn complete_objective(&mut self, objective: usize) {
        if let Some(last) = self.last_node_of(objective) {
            self.cursor = self.cursor.max(last + 1);
        }
    }

    /// Replace the unreached part of `objective` with `waypoints[resume_index..]`.
    /// An `anchor` (the diversion point) becomes the start of the new leg.
    pub fn revise(
        &mut self,
        objective: usize,
        waypoints: &[Waypoint],
        resume_index: usize,
        anchor: Option<Waypoint>,
    ) {
        let tail = &waypoints[resume_index.min(waypoints.len())..];
        let new_nodes = |w: &Waypoint| RouteNode {
            at: *w,
            objective: Some(objective),
        };
        match (self.first_node_of(objective), self.last_node_of(objective)) {
            (Some(s), Some(e)) => {
                let p = self.cursor.max(s).min(e + 1);
                let mut nodes: Vec<RouteNode> = self.nodes[..p].to_vec();
                let mut cursor = self.cursor;
                if let Some(a) = anchor {
                    if p == self.cursor && nodes[p - 1].at.distance(&a) > 1e-9 {
                        nodes.push(RouteNode {
                            at: a,
                            objective: None,
                        });
                        cursor = p + 1;
                    }
                }
                nodes.extend(tail.iter().map(new_nodes));
                nodes.extend_from_slice(&self.nodes[e + 1..]);
                self.nodes = nodes;
                self.cursor = cursor;
            }
            _ => self.nodes.extend(tail.iter().map(new_nodes)),
        }
        self.recompute();
    }
}
