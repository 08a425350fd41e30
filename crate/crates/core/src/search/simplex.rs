//! Nelder-Mead simplex maximizer.
//!
//! The best vertex value never decreases between iterations. The run stops
//! once every vertex lies within `min_diameter` of the best one, or after
//! `max_iterations`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub initial_step: f64,
    pub max_iterations: usize,
    pub min_diameter: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            initial_step: 0.2,
            max_iterations: 4000,
            min_diameter: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Vertex {
    x: Vec<f64>,
    value: f64,
}

fn affine(base: &[f64], toward: &[f64], t: f64) -> Vec<f64> {
    base.iter()
        .zip(toward)
        .map(|(b, w)| b + t * (w - b))
        .collect()
}

fn diameter(simplex: &[Vertex]) -> f64 {
    let best = &simplex[0].x;
    simplex[1..]
        .iter()
        .map(|v| {
            v.x.iter()
                .zip(best)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

fn sort_desc(simplex: &mut [Vertex]) {
    // stable: earlier vertices win ties
    simplex.sort_by(|a, b| b.value.total_cmp(&a.value));
}

pub fn maximize<F>(f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vertex> = Vec::with_capacity(n + 1);
    simplex.push(Vertex {
        x: x0.to_vec(),
        value: f(x0),
    });
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let value = f(&x);
        simplex.push(Vertex { x, value });
    }
    sort_desc(&mut simplex);

    let mut iterations = 0;
    let mut converged = n == 0;
    while !converged && iterations < opts.max_iterations {
        if diameter(&simplex) < opts.min_diameter {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(&v.x) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].value;
        let second_worst = simplex[n - 1].value;
        let best = simplex[0].value;

        let xr = affine(&centroid, &simplex[n].x, -REFLECT);
        let fr = f(&xr);
        if fr > best {
            let xe = affine(&centroid, &simplex[n].x, -EXPAND);
            let fe = f(&xe);
            simplex[n] = if fe > fr {
                Vertex { x: xe, value: fe }
            } else {
                Vertex { x: xr, value: fr }
            };
        } else if fr > second_worst {
            simplex[n] = Vertex { x: xr, value: fr };
        } else {
            let (xc, fc) = if fr > worst {
                let xc = affine(&centroid, &xr, CONTRACT);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = affine(&centroid, &simplex[n].x, CONTRACT);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc > worst.max(fr) {
                simplex[n] = Vertex { x: xc, value: fc };
            } else {
                let anchor = simplex[0].x.clone();
                for v in simplex[1..].iter_mut() {
                    v.x = affine(&anchor, &v.x, SHRINK);
                    v.value = f(&v.x);
                }
            }
        }
        sort_desc(&mut simplex);
    }
    if !converged {
        converged = diameter(&simplex) < opts.min_diameter;
    }
    let best = simplex.swap_remove(0);
    SimplexResult {
        x: best.x,
        value: best.value,
        iterations,
        converged,
    }
}
