use nett_core::operators::fbp::{disc_phantom, mean_inside_disc};
use nett_core::operators::{ForwardOperator, PatOperator};
use nett_core::{relative_error, Sinogram};

// Variant A: spatial-domain Ram-Lak kernel (Kak-Slaney) on r*g, linear convolution.
fn filter_ramlak_spatial(op: &PatOperator, y: &Sinogram) -> Sinogram {
    let (rows, m) = (y.n_sensors(), y.n_samples());
    let dr = op.r_max() / op.n_radii() as f64;
    let mut out = vec![0.0; rows * m];
    let mut kern = vec![0.0; 2 * m];
    for n in 0..2 * m {
        let d = n as isize;
        kern[n] = if d == 0 {
            1.0 / (4.0 * dr * dr)
        } else if d % 2 == 0 {
            0.0
        } else {
            -1.0 / (std::f64::consts::PI.powi(2) * (d * d) as f64 * dr * dr)
        };
    }
    for s in 0..rows {
        let t: Vec<f64> = (0..m).map(|k| op.radius(k) * y.get(s, k)).collect();
        for i in 0..m {
            let mut acc = 0.0;
            for (k, &tk) in t.iter().enumerate() {
                let d = (i as isize - k as isize).unsigned_abs();
                acc += tk * kern[d];
            }
            out[s * m + i] = acc * dr; // integral scaling
        }
    }
    Sinogram::new(rows, m, out).unwrap()
}

// Variant B: log-kernel inversion filter: u = D(r * D g); h(rho) = rho * sum_k u_k ln|r_k^2 - rho^2| dr
fn filter_logkernel(op: &PatOperator, y: &Sinogram) -> Sinogram {
    let (rows, m) = (y.n_sensors(), y.n_samples());
    let dr = op.r_max() / op.n_radii() as f64;
    let mut out = vec![0.0; rows * m];
    for s in 0..rows {
        let g = |k: isize| -> f64 {
            if k < 0 || k as usize >= m { 0.0 } else { y.get(s, k as usize) }
        };
        // dg = central derivative of g
        let dg: Vec<f64> = (0..m).map(|k| (g(k as isize + 1) - g(k as isize - 1)) / (2.0 * dr)).collect();
        // v = r * dg
        let v: Vec<f64> = (0..m).map(|k| op.radius(k) * dg[k]).collect();
        let vk = |k: isize| -> f64 {
            if k < 0 || k as usize >= m { 0.0 } else { v[k as usize] }
        };
        // u = D v
        let u: Vec<f64> = (0..m).map(|k| (vk(k as isize + 1) - vk(k as isize - 1)) / (2.0 * dr)).collect();
        for i in 0..m {
            let rho = op.radius(i);
            let mut acc = 0.0;
            for (k, &ukv) in u.iter().enumerate() {
                let rk = op.radius(k);
                let lg = if k == i {
                    (2.0 * rho).ln() + (dr / 2.0).ln() - 1.0
                } else {
                    ((rk * rk - rho * rho).abs()).ln()
                };
                acc += ukv * lg;
            }
            out[s * m + i] = rho * acc * dr;
        }
    }
    Sinogram::new(rows, m, out).unwrap()
}

fn eval(op: &PatOperator, name: &str, filtered: &Sinogram, phantom: &nett_core::Image) {
    let raw = op.adjoint(filtered).unwrap();
    let mean = mean_inside_disc(&raw, 0.5);
    let scale = 1.0 / mean;
    let recon = raw.scaled(scale);
    let err = relative_error(phantom, &recon).unwrap();
    println!("{name}: scale={scale:.6e} rel_err={err:.4}");
    let prof: Vec<String> = (0..64).step_by(4).map(|c| format!("{:+.2}", recon.get(32, c))).collect();
    println!("  profile: {}", prof.join(" "));
}

fn main() {
    let op = PatOperator::new(64, 64, 256, 2.0, (0..64).collect(), 512).unwrap();
    let phantom = disc_phantom(64, 0.5, 1.0);
    let y = op.apply(&phantom).unwrap();
    eval(&op, "ramlak-spatial", &filter_ramlak_spatial(&op, &y), &phantom);
    eval(&op, "log-kernel   ", &filter_logkernel(&op, &y), &phantom);
}
