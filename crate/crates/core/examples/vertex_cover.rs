//! Minimum vertex cover as a minimum trust query. The trust cost equals
//! the size of the smallest cover.

use trustcost::solver::{reduce_vertex_cover, solve_horn, SimpleGraph};

fn main() -> anyhow::Result<()> {
    let graphs = [
        ("triangle", SimpleGraph::new(3, [(0, 1), (1, 2), (0, 2)])),
        (
            "star",
            SimpleGraph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]),
        ),
        (
            "5-cycle",
            SimpleGraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
        ),
        (
            "path",
            SimpleGraph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]),
        ),
    ];
    for (name, g) in graphs {
        let q = reduce_vertex_cover(&g)?;
        let sol = solve_horn(&q)?;
        let cover: Vec<&str> = sol
            .chosen
            .iter()
            .filter(|id| !id.contains('-') && id.starts_with('v'))
            .map(String::as_str)
            .collect();
        println!(
            "{name:>8}: {} assumptions, cover size {:?}, cover {cover:?}",
            q.assumptions.len(),
            sol.min_cost
        );
    }
    Ok(())
}
