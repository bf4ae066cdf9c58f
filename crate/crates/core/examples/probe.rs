use confnav::geometry::*;
use confnav::koebe::*;

fn report_deltas(tag: &str, r: Result<(CompositeMap, IterationReport), confnav::Error>) {
    match r {
        Ok((_, report)) => {
            let s: Vec<String> = report.deltas.iter().map(|d| format!("{d:.2e}")).collect();
            println!("{tag}: CONVERGED [{}]", s.join(" "));
        }
        Err(confnav::Error::NotConverged { report, .. }) => {
            let s: Vec<String> = report.deltas.iter().map(|d| format!("{d:.2e}")).collect();
            println!("{tag}: NOT CONVERGED [{}]", s.join(" "));
        }
        Err(e) => println!("{tag}: ERROR {e}"),
    }
}

fn main() {
    // annulus at several N
    for n in [128usize, 256] {
        let spec = WorkspaceSpec {
            external: CurveSpec::Circle { center: [0.0, 0.0], radius: 1.0 },
            internal: vec![CurveSpec::Circle { center: [0.0, 0.0], radius: 0.3 }],
            centers: vec![[0.0, 0.0]],
            anchor: [0.65, 0.0],
            n_nodes: n,
        };
        let ws = build_workspace(&spec, None).unwrap();
        report_deltas(&format!("annulus N={n} tol=1e-12"), run_koebe(&ws, 1e-12, 10));
    }
    // generic 3-obstacle workspace, N=256, tol 1e-13
    let spec = WorkspaceSpec {
        external: CurveSpec::Circle { center: [0.0, 0.0], radius: 1.6 },
        internal: vec![
            CurveSpec::Ellipse { center: [0.55, 0.5], semi_axes: [0.28, 0.16], rotation: 0.5 },
            CurveSpec::TrigPolynomial { terms: vec![
                TrigTerm { degree: 1, coeff: [0.22, 0.0] },
                TrigTerm { degree: 6, coeff: [0.03, 0.0] },
                TrigTerm { degree: -4, coeff: [0.03, 0.0] },
                TrigTerm { degree: 0, coeff: [-0.6, 0.45] },
            ]},
            CurveSpec::Ellipse { center: [0.1, -0.62], semi_axes: [0.3, 0.18], rotation: -0.9 },
        ],
        centers: vec![[0.55, 0.5], [-0.6, 0.45], [0.1, -0.62]],
        anchor: [0.0, 0.0],
        n_nodes: 256,
    };
    let ws = build_workspace(&spec, None).unwrap();
    println!("3-obs valid: {}", validate_workspace(&ws).is_valid());
    report_deltas("3-obstacle N=256 tol=1e-13", run_koebe(&ws, 1e-13, 20));
}
