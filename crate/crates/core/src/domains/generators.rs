use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DomainError;
use crate::model::{Action, Cmp, Constraint, ControlVarSpec, Effect, Expr, Problem, State};

fn c(v: f64) -> Expr {
    Expr::Const(v)
}

fn le(lhs: Expr, rhs: f64) -> Constraint {
    if rhs == 0.0 {
        Constraint::compare(lhs, Cmp::Le)
    } else {
        Constraint::compare_sides(lhs, Cmp::Le, c(rhs))
    }
}

fn ge(lhs: Expr, rhs: f64) -> Constraint {
    if rhs == 0.0 {
        Constraint::compare(lhs, Cmp::Ge)
    } else {
        Constraint::compare_sides(lhs, Cmp::Ge, c(rhs))
    }
}

fn minus(e: Expr, v: f64) -> Expr {
    if v == 0.0 {
        e
    } else {
        Expr::sub(e, c(v))
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), DomainError> {
    if ok {
        Ok(())
    } else {
        Err(DomainError::InvalidSize(msg()))
    }
}

/// `n` counters in `[0, max_val]`, all starting at 0, moved by a shared
/// control `u ∈ [0, u_max]`. The goal orders them strictly:
/// `c_{i+1} >= c_i + 1`.
pub fn make_counters(n: usize, max_val: i64, u_max: i64) -> Result<Problem, DomainError> {
    check(n >= 2, || format!("counters needs n >= 2, got {n}"))?;
    check(max_val >= n as i64, || format!("counters needs max_val >= n, got {max_val}"))?;
    check(u_max >= 1, || format!("counters needs u_max >= 1, got {u_max}"))?;
    let u = || Expr::control(0);
    let mut actions = Vec::with_capacity(2 * n);
    for i in 0..n {
        let ci = || Expr::num(i);
        actions.push(Action::new(
            format!("inc-c{i}"),
            le(Expr::add(ci(), u()), max_val as f64),
            Effect { bools: vec![], nums: vec![(i, Expr::add(ci(), u()))] },
        ));
        actions.push(Action::new(
            format!("dec-c{i}"),
            ge(Expr::sub(ci(), u()), 0.0),
            Effect { bools: vec![], nums: vec![(i, Expr::sub(ci(), u()))] },
        ));
    }
    let goal = Constraint::And(
        (0..n - 1).map(|i| ge(Expr::sub(Expr::num(i + 1), Expr::add(Expr::num(i), c(1.0))), 0.0)).collect(),
    );
    Ok(Problem {
        name: format!("counters-{n}"),
        bools: vec![],
        nums: (0..n).map(|i| format!("c{i}")).collect(),
        controls: vec![ControlVarSpec::new("u", 0, u_max)],
        actions,
        init: State::new(vec![], vec![0.0; n]),
        goal,
    })
}

pub const SAILING_BAND: f64 = 25.0;

/// Boats start at the origin; person `p` waits on the line `x + y = d_p`.
/// A boat rescues a person when `|x + y - d_p| <= 25`.
pub fn make_sailing_with(n_boats: usize, persons: &[f64]) -> Result<Problem, DomainError> {
    check(n_boats >= 1, || "sailing needs at least one boat".into())?;
    check(!persons.is_empty(), || "sailing needs at least one person".into())?;
    let (dx, dy) = (|| Expr::control(0), || Expr::control(1));
    let mut nums = Vec::new();
    let mut actions = Vec::new();
    for b in 0..n_boats {
        nums.push(format!("x{b}"));
        nums.push(format!("y{b}"));
        let (x, y) = (2 * b, 2 * b + 1);
        actions.push(Action::new(
            format!("move-b{b}"),
            Constraint::truth(),
            Effect { bools: vec![], nums: vec![(x, Expr::add(Expr::num(x), dx())), (y, Expr::add(Expr::num(y), dy()))] },
        ));
    }
    for b in 0..n_boats {
        let line = || Expr::add(Expr::num(2 * b), Expr::num(2 * b + 1));
        for (p, &d) in persons.iter().enumerate() {
            actions.push(Action::new(
                format!("rescue-b{b}-p{p}"),
                Constraint::And(vec![le(minus(line(), d), SAILING_BAND), ge(minus(line(), d), -SAILING_BAND)]),
                Effect { bools: vec![(p, true)], nums: vec![] },
            ));
        }
    }
    Ok(Problem {
        name: format!("sailing-{n_boats}-{}", persons.len()),
        bools: (0..persons.len()).map(|p| format!("saved{p}")).collect(),
        init: State::new(vec![false; persons.len()], vec![0.0; nums.len()]),
        nums,
        controls: vec![ControlVarSpec::new("dx", -10, 10), ControlVarSpec::new("dy", -10, 10)],
        actions,
        goal: Constraint::And((0..persons.len()).map(|p| Constraint::BoolEq(p, true)).collect()),
    })
}

/// Sailing with person lines drawn uniformly from the integers in
/// `[-spread, spread]`.
pub fn make_sailing(n_boats: usize, n_persons: usize, spread: i64, seed: u64) -> Result<Problem, DomainError> {
    check(n_persons >= 1, || "sailing needs at least one person".into())?;
    check(spread >= 0, || format!("sailing spread must be nonnegative, got {spread}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let persons: Vec<f64> = (0..n_persons).map(|_| rng.gen_range(-spread..=spread) as f64).collect();
    make_sailing_with(n_boats, &persons)
}

/// Blocks on the box `[0, grid]^2`, moved by `(mx, my) ∈ [-grid, grid]^2`.
/// `groups[i]` is the group of block `i`; the goal puts every block on the
/// position of the first member of its group.
pub fn make_blockgrouping_with(positions: &[(i64, i64)], groups: &[usize], grid: i64) -> Result<Problem, DomainError> {
    check(grid >= 1, || format!("block-grouping needs grid >= 1, got {grid}"))?;
    check(!positions.is_empty() && positions.len() == groups.len(), || {
        "block-grouping needs one group index per block".into()
    })?;
    check(positions.iter().all(|&(x, y)| (0..=grid).contains(&x) && (0..=grid).contains(&y)), || {
        "block positions must lie in the grid".into()
    })?;
    let (mx, my) = (|| Expr::control(0), || Expr::control(1));
    let g = grid as f64;
    let mut actions = Vec::new();
    for i in 0..positions.len() {
        let (x, y) = (2 * i, 2 * i + 1);
        let nx = || Expr::add(Expr::num(x), mx());
        let ny = || Expr::add(Expr::num(y), my());
        actions.push(Action::new(
            format!("move-b{i}"),
            Constraint::And(vec![ge(nx(), 0.0), le(nx(), g), ge(ny(), 0.0), le(ny(), g)]),
            Effect { bools: vec![], nums: vec![(x, nx()), (y, ny())] },
        ));
    }
    let mut goal = Vec::new();
    for (i, &gi) in groups.iter().enumerate() {
        let Some(lead) = groups.iter().position(|&gj| gj == gi) else { continue };
        if lead == i {
            continue;
        }
        for k in 0..2 {
            goal.push(Constraint::compare(Expr::sub(Expr::num(2 * lead + k), Expr::num(2 * i + k)), Cmp::Eq));
        }
    }
    let n_groups = {
        let mut g = groups.to_vec();
        g.sort_unstable();
        g.dedup();
        g.len()
    };
    Ok(Problem {
        name: format!("block-grouping-{}-{n_groups}", positions.len()),
        bools: vec![],
        nums: (0..positions.len()).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect(),
        controls: vec![ControlVarSpec::new("mx", -grid, grid), ControlVarSpec::new("my", -grid, grid)],
        actions,
        init: State::new(vec![], positions.iter().flat_map(|&(x, y)| [x as f64, y as f64]).collect()),
        goal: Constraint::And(goal),
    })
}

/// Random integer positions; block `i` belongs to group `i mod n_groups`.
pub fn make_blockgrouping(n_blocks: usize, n_groups: usize, grid: i64, seed: u64) -> Result<Problem, DomainError> {
    check(n_groups >= 1 && n_blocks >= n_groups, || {
        format!("block-grouping needs blocks >= groups >= 1, got {n_blocks} and {n_groups}")
    })?;
    check(grid >= 1, || format!("block-grouping needs grid >= 1, got {grid}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions: Vec<(i64, i64)> = (0..n_blocks).map(|_| (rng.gen_range(0..=grid), rng.gen_range(0..=grid))).collect();
    let groups: Vec<usize> = (0..n_blocks).map(|i| i % n_groups).collect();
    make_blockgrouping_with(&positions, &groups, grid)
}

pub const DRONE_REACH: f64 = 0.5;

/// A drone in the box `[0, grid]^3` with battery `b`. Moving by
/// `(dx, dy, dz) ∈ [-1, 1]^3` costs `dx^2 + dy^2 + dz^2`; a point is visited
/// from within 0.5 on every axis.
pub fn make_drone_with(
    grid: i64,
    start: (i64, i64, i64),
    battery: f64,
    points: &[(i64, i64, i64)],
) -> Result<Problem, DomainError> {
    check(grid >= 1, || format!("drone needs grid >= 1, got {grid}"))?;
    check(!points.is_empty(), || "drone needs at least one point".into())?;
    check(battery >= 0.0 && battery.is_finite(), || "drone battery must be nonnegative".into())?;
    let g = grid as f64;
    let d = |k: usize| Expr::control(k);
    let pos = |k: usize| Expr::num(k);
    let b = 3;
    let cost = Expr::add(Expr::add(Expr::pow(d(0), 2), Expr::pow(d(1), 2)), Expr::pow(d(2), 2));
    let mut pre = vec![ge(Expr::sub(Expr::num(b), cost.clone()), 0.0)];
    for k in 0..3 {
        pre.push(ge(Expr::add(pos(k), d(k)), 0.0));
        pre.push(le(Expr::add(pos(k), d(k)), g));
    }
    let mut eff: Vec<(usize, Expr)> = (0..3).map(|k| (k, Expr::add(pos(k), d(k)))).collect();
    eff.push((b, Expr::sub(Expr::num(b), cost)));
    let mut actions = vec![Action::new("move", Constraint::And(pre), Effect { bools: vec![], nums: eff })];
    for (p, &(px, py, pz)) in points.iter().enumerate() {
        let mut band = Vec::new();
        for (k, target) in [px, py, pz].into_iter().enumerate() {
            band.push(le(minus(pos(k), target as f64), DRONE_REACH));
            band.push(ge(minus(pos(k), target as f64), -DRONE_REACH));
        }
        actions.push(Action::new(
            format!("visit-p{p}"),
            Constraint::And(band),
            Effect { bools: vec![(p, true)], nums: vec![] },
        ));
    }
    Ok(Problem {
        name: format!("drone-{grid}-{}", points.len()),
        bools: (0..points.len()).map(|p| format!("visited{p}")).collect(),
        nums: ["x", "y", "z", "b"].map(String::from).to_vec(),
        controls: ["dx", "dy", "dz"].map(|n| ControlVarSpec::new(n, -1, 1)).to_vec(),
        actions,
        init: State::new(vec![false; points.len()], vec![start.0 as f64, start.1 as f64, start.2 as f64, battery]),
        goal: Constraint::And((0..points.len()).map(|p| Constraint::BoolEq(p, true)).collect()),
    })
}

/// Drone starting at the origin with random integer points in the box.
pub fn make_drone(grid: i64, n_points: usize, battery: i64, seed: u64) -> Result<Problem, DomainError> {
    check(n_points >= 1, || "drone needs at least one point".into())?;
    check(grid >= 1, || format!("drone needs grid >= 1, got {grid}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(i64, i64, i64)> =
        (0..n_points).map(|_| (rng.gen_range(0..=grid), rng.gen_range(0..=grid), rng.gen_range(0..=grid))).collect();
    make_drone_with(grid, (0, 0, 0), battery as f64, &points)
}
