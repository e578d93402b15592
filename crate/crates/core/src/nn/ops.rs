//! Forward and backward passes for every layer the acoustic model uses.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::math;

fn kernel_dims(kernels: &Tensor) -> Result<(usize, usize, usize)> {
    match kernels.shape() {
        &[k, c, f] => Ok((k, c, f)),
        other => Err(Error::dim(
            "kernels",
            format!("expected width x in_channels x filters, got {other:?}"),
        )),
    }
}

/// Valid (unpadded) 1-D convolution over time.
///
/// `input` is `T x Cin`, `kernels` is `K x Cin x F`, `bias` has `F` entries;
/// the result is `T' x F` with `T' = (T - K) / stride + 1`.
pub fn conv1d_forward(input: &Tensor, kernels: &Tensor, bias: &Tensor, stride: usize) -> Result<Tensor> {
    let (frames, in_ch) = input.dims2("input")?;
    let (width, k_in, filters) = kernel_dims(kernels)?;
    if k_in != in_ch {
        return Err(Error::dim(
            "channels",
            format!("input has {in_ch} channels, kernels expect {k_in}"),
        ));
    }
    if bias.len() != filters {
        return Err(Error::dim(
            "bias",
            format!("expected {filters} entries, got {}", bias.len()),
        ));
    }
    if stride == 0 {
        return Err(Error::Usage("convolution stride must be positive".into()));
    }
    if frames < width {
        return Err(Error::dim(
            "time",
            format!("{frames} frames is shorter than the kernel width {width}"),
        ));
    }
    let out_frames = (frames - width) / stride + 1;
    let w = kernels.data();
    let mut out = Vec::with_capacity(out_frames * filters);
    for t in 0..out_frames {
        let start = out.len();
        out.extend_from_slice(bias.data());
        let acc = &mut out[start..];
        for k in 0..width {
            let x_row = input.row(t * stride + k);
            for (c, &x) in x_row.iter().enumerate() {
                let w_row = &w[(k * in_ch + c) * filters..(k * in_ch + c + 1) * filters];
                for (a, &wv) in acc.iter_mut().zip(w_row) {
                    *a += x * wv;
                }
            }
        }
    }
    Tensor::from_vec(&[out_frames, filters], out)
}

/// Gradients of [`conv1d_forward`] with respect to its three inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Conv1dGrads {
    pub input: Tensor,
    pub kernels: Tensor,
    pub bias: Tensor,
}

pub fn conv1d_backward(
    upstream: &Tensor,
    input: &Tensor,
    kernels: &Tensor,
    stride: usize,
) -> Result<Conv1dGrads> {
    let (frames, in_ch) = input.dims2("input")?;
    let (width, k_in, filters) = kernel_dims(kernels)?;
    let (out_frames, up_f) = upstream.dims2("upstream")?;
    if k_in != in_ch || up_f != filters || stride == 0 || frames < width {
        return Err(Error::dim(
            "upstream",
            format!(
                "gradient {:?} does not match the cached forward pass",
                upstream.shape()
            ),
        ));
    }
    if out_frames != (frames - width) / stride + 1 {
        return Err(Error::dim(
            "time",
            format!(
                "upstream has {out_frames} frames, forward produced {}",
                (frames - width) / stride + 1
            ),
        ));
    }
    let w = kernels.data();
    let mut d_in = vec![0.0; frames * in_ch];
    let mut d_k = vec![0.0; width * in_ch * filters];
    let mut d_b = vec![0.0; filters];
    for t in 0..out_frames {
        let g = upstream.row(t);
        for (b, &gv) in d_b.iter_mut().zip(g) {
            *b += gv;
        }
        for k in 0..width {
            let row = t * stride + k;
            let x_row = input.row(row);
            for c in 0..in_ch {
                let base = (k * in_ch + c) * filters;
                let x = x_row[c];
                let mut dx = 0.0;
                for f in 0..filters {
                    d_k[base + f] += x * g[f];
                    dx += w[base + f] * g[f];
                }
                d_in[row * in_ch + c] += dx;
            }
        }
    }
    Ok(Conv1dGrads {
        input: Tensor::from_vec(&[frames, in_ch], d_in)?,
        kernels: Tensor::from_vec(&[width, in_ch, filters], d_k)?,
        bias: Tensor::from_vec(&[filters], d_b)?,
    })
}

/// Non-overlapping max pooling over time. Trailing `T mod width` frames are
/// dropped; ties go to the earliest frame.
///
/// Returns the pooled tensor and, for each output element, the input row
/// that supplied the maximum.
pub fn maxpool1d(input: &Tensor, width: usize) -> Result<(Tensor, Vec<usize>)> {
    let (frames, channels) = input.dims2("input")?;
    if width == 0 {
        return Err(Error::Usage("pool width must be positive".into()));
    }
    if frames < width {
        return Err(Error::dim(
            "time",
            format!("{frames} frames is shorter than the pool width {width}"),
        ));
    }
    let out_frames = frames / width;
    let mut out = Vec::with_capacity(out_frames * channels);
    let mut argmax = Vec::with_capacity(out_frames * channels);
    for o in 0..out_frames {
        for c in 0..channels {
            let mut best_row = o * width;
            let mut best = input.row(best_row)[c];
            for r in o * width + 1..(o + 1) * width {
                let v = input.row(r)[c];
                if v > best {
                    best = v;
                    best_row = r;
                }
            }
            out.push(best);
            argmax.push(best_row);
        }
    }
    Ok((Tensor::from_vec(&[out_frames, channels], out)?, argmax))
}

/// Per-channel maximum over the whole time axis, as a `1 x C` row.
pub fn global_maxpool_time(input: &Tensor) -> Result<(Tensor, Vec<usize>)> {
    let (frames, _) = input
        .dims2("input")
        .map_err(|_| Error::dim("time", "global pooling needs a T x C input"))?;
    if frames == 0 {
        return Err(Error::dim("time", "empty time axis"));
    }
    maxpool1d(input, frames)
}

/// Route pooled gradients back to the argmax rows of a `frames x C` input.
pub fn maxpool_backward(upstream: &Tensor, argmax: &[usize], frames: usize) -> Result<Tensor> {
    let (_, channels) = upstream.dims2("upstream")?;
    if argmax.len() != upstream.len() {
        return Err(Error::dim(
            "argmax",
            format!("{} indices for {} gradients", argmax.len(), upstream.len()),
        ));
    }
    let mut grad = vec![0.0; frames * channels];
    for (i, (&row, &g)) in argmax.iter().zip(upstream.data()).enumerate() {
        if row >= frames {
            return Err(Error::dim("argmax", format!("row {row} outside {frames} frames")));
        }
        grad[row * channels + i % channels] += g;
    }
    Tensor::from_vec(&[frames, channels], grad)
}

/// Affine map of a `1 x N` row through `N x M` weights plus `M` biases.
pub fn dense_forward(input: &Tensor, weights: &Tensor, bias: &Tensor) -> Result<Tensor> {
    let (rows, n) = input.dims2("input")?;
    let (wn, m) = weights.dims2("weights")?;
    if rows != 1 {
        return Err(Error::dim("input", format!("expected a single row, got {rows}")));
    }
    if wn != n {
        return Err(Error::dim(
            "features",
            format!("input has {n} features, weights expect {wn}"),
        ));
    }
    if bias.len() != m {
        return Err(Error::dim(
            "bias",
            format!("expected {m} entries, got {}", bias.len()),
        ));
    }
    let mut out = bias.data().to_vec();
    for (i, &x) in input.data().iter().enumerate() {
        for (o, &w) in out.iter_mut().zip(weights.row(i)) {
            *o += x * w;
        }
    }
    Ok(Tensor::row_vector(out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseGrads {
    pub input: Tensor,
    pub weights: Tensor,
    pub bias: Tensor,
}

pub fn dense_backward(upstream: &Tensor, input: &Tensor, weights: &Tensor) -> Result<DenseGrads> {
    let (n, m) = weights.dims2("weights")?;
    if input.len() != n || upstream.len() != m {
        return Err(Error::dim(
            "upstream",
            format!(
                "input {:?} / upstream {:?} do not match weights {n}x{m}",
                input.shape(),
                upstream.shape()
            ),
        ));
    }
    let g = upstream.data();
    let mut d_w = Vec::with_capacity(n * m);
    let mut d_in = Vec::with_capacity(n);
    for (i, &x) in input.data().iter().enumerate() {
        d_w.extend(g.iter().map(|&gv| x * gv));
        d_in.push(weights.row(i).iter().zip(g).map(|(w, gv)| w * gv).sum());
    }
    Ok(DenseGrads {
        input: Tensor::row_vector(d_in),
        weights: Tensor::from_vec(&[n, m], d_w)?,
        bias: Tensor::from_vec(&[m], g.to_vec())?,
    })
}

pub fn relu(t: &Tensor) -> Tensor {
    let mut out = t.clone();
    out.data_mut().iter_mut().for_each(|v| *v = v.max(0.0));
    out
}

/// Gradient through ReLU given the forward *output*.
pub fn relu_backward(upstream: &Tensor, output: &Tensor) -> Result<Tensor> {
    if upstream.shape() != output.shape() {
        return Err(Error::dim(
            "upstream",
            format!("{:?} vs activation {:?}", upstream.shape(), output.shape()),
        ));
    }
    let mut g = upstream.clone();
    g.data_mut().iter_mut().zip(output.data()).for_each(|(gv, &y)| {
        if y <= 0.0 {
            *gv = 0.0
        }
    });
    Ok(g)
}

/// Logistic function, kept strictly inside `(0, 1)`.
pub fn sigmoid_scalar(x: f64) -> f64 {
    let s = if x >= 0.0 {
        1.0 / (1.0 + math::exp(-x))
    } else {
        let e = math::exp(x);
        e / (1.0 + e)
    };
    s.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

pub fn sigmoid(t: &Tensor) -> Tensor {
    let mut out = t.clone();
    out.data_mut().iter_mut().for_each(|v| *v = sigmoid_scalar(*v));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(shape: &[usize], rng: &mut ChaCha8Rng) -> Tensor {
        let n = shape.iter().product();
        Tensor::from_vec(shape, (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn identity_kernel_copies_channel_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let input = random(&[7, 3], &mut rng);
        let kernels = Tensor::from_vec(&[1, 3, 1], vec![1.0, 0.0, 0.0]).unwrap();
        let bias = Tensor::zeros(&[1]);
        let out = conv1d_forward(&input, &kernels, &bias, 1).unwrap();
        assert_eq!(out.shape(), &[7, 1]);
        for t in 0..7 {
            assert_eq!(out.data()[t], input.row(t)[0]);
        }
    }

    #[test]
    fn conv_matches_direct_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let input = random(&[5, 2], &mut rng);
        let kernels = random(&[2, 2, 1], &mut rng);
        let bias = random(&[1], &mut rng);
        let out = conv1d_forward(&input, &kernels, &bias, 1).unwrap();
        assert_eq!(out.shape(), &[4, 1]);
        for t in 0..4 {
            let mut expected = bias.data()[0];
            for k in 0..2 {
                for c in 0..2 {
                    expected += input.data()[(t + k) * 2 + c] * kernels.data()[k * 2 + c];
                }
            }
            assert!((out.data()[t] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn conv_stride_and_zero_input() {
        let input = Tensor::zeros(&[10, 2]);
        let kernels = Tensor::filled(&[3, 2, 4], 0.5);
        let bias = Tensor::from_vec(&[4], vec![1.0, -2.0, 0.0, 3.5]).unwrap();
        let out = conv1d_forward(&input, &kernels, &bias, 2).unwrap();
        assert_eq!(out.shape(), &[4, 4]);
        for t in 0..4 {
            assert_eq!(out.row(t), bias.data());
        }
    }

    #[test]
    fn conv_shape_errors_name_the_axis() {
        let input = Tensor::zeros(&[4, 2]);
        let bias = Tensor::zeros(&[1]);
        let err = conv1d_forward(&input, &Tensor::zeros(&[2, 3, 1]), &bias, 1).unwrap_err();
        assert!(matches!(err, Error::Dimension { axis: "channels", .. }));
        let err = conv1d_forward(&input, &Tensor::zeros(&[5, 2, 1]), &bias, 1).unwrap_err();
        assert!(matches!(err, Error::Dimension { axis: "time", .. }));
        let err = conv1d_forward(&input, &Tensor::zeros(&[2, 2, 2]), &bias, 1).unwrap_err();
        assert!(matches!(err, Error::Dimension { axis: "bias", .. }));
    }

    #[test]
    fn conv_backward_bias_is_upstream_column_sum_and_zero_upstream_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let input = random(&[6, 2], &mut rng);
        let kernels = random(&[3, 2, 3], &mut rng);
        let up = random(&[4, 3], &mut rng);
        let g = conv1d_backward(&up, &input, &kernels, 1).unwrap();
        for f in 0..3 {
            let s: f64 = (0..4).map(|t| up.row(t)[f]).sum();
            assert!((g.bias.data()[f] - s).abs() < 1e-14);
        }
        let g0 = conv1d_backward(&Tensor::zeros(&[4, 3]), &input, &kernels, 1).unwrap();
        assert!(g0
            .input
            .data()
            .iter()
            .chain(g0.kernels.data())
            .chain(g0.bias.data())
            .all(|&v| v == 0.0));
    }

    #[test]
    fn maxpool_hand_case_and_remainder() {
        let input = Tensor::from_vec(&[6, 1], vec![1.0, 3.0, 2.0, 5.0, 4.0, 0.0]).unwrap();
        let (out, arg) = maxpool1d(&input, 3).unwrap();
        assert_eq!(out.data(), &[3.0, 5.0]);
        assert_eq!(arg, vec![1, 3]);
        let input = Tensor::from_vec(&[7, 1], vec![1.0, 3.0, 2.0, 5.0, 4.0, 0.0, 9.0]).unwrap();
        let (out, _) = maxpool1d(&input, 3).unwrap();
        assert_eq!(out.data(), &[3.0, 5.0]);
    }

    #[test]
    fn maxpool_ties_go_to_earliest_and_width_one_is_identity() {
        let input = Tensor::from_vec(&[4, 1], vec![2.0, 2.0, 1.0, 1.0]).unwrap();
        let (_, arg) = maxpool1d(&input, 2).unwrap();
        assert_eq!(arg, vec![0, 2]);
        let (same, _) = maxpool1d(&input, 1).unwrap();
        assert_eq!(same, input);
        let c = Tensor::filled(&[9, 2], 0.25);
        let (out, _) = maxpool1d(&c, 3).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.25));
        assert!(matches!(
            maxpool1d(&input, 5),
            Err(Error::Dimension { axis: "time", .. })
        ));
    }

    #[test]
    fn global_pool_matches_column_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let input = random(&[13, 5], &mut rng);
        let (out, _) = global_maxpool_time(&input).unwrap();
        assert_eq!(out.shape(), &[1, 5]);
        for c in 0..5 {
            let m = (0..13).map(|t| input.row(t)[c]).fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(out.data()[c], m);
        }
        let single = random(&[1, 5], &mut rng);
        assert_eq!(global_maxpool_time(&single).unwrap().0, single);
    }

    #[test]
    fn global_pool_ignores_dominated_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let input = random(&[6, 3], &mut rng);
        let (before, _) = global_maxpool_time(&input).unwrap();
        let mut data = input.data().to_vec();
        for _ in 0..4 {
            for c in 0..3 {
                data.push(before.data()[c] - rng.gen_range(0.0..1.0));
            }
        }
        let longer = Tensor::from_vec(&[10, 3], data).unwrap();
        assert_eq!(global_maxpool_time(&longer).unwrap().0, before);
    }

    #[test]
    fn dense_cases() {
        let input = Tensor::row_vector(vec![1.5, -2.0]);
        let eye = Tensor::from_vec(&[2, 2], vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(dense_forward(&input, &eye, &Tensor::zeros(&[2])).unwrap(), input);

        let x = Tensor::row_vector(vec![1.0, 2.0, 3.0]);
        let w = Tensor::from_vec(&[3, 2], vec![0.5, -1.0, 2.0, 0.0, -0.5, 1.0]).unwrap();
        let b = Tensor::from_vec(&[2], vec![0.1, 0.2]).unwrap();
        let out = dense_forward(&x, &w, &b).unwrap();
        // 1*0.5 + 2*2 + 3*(-0.5) + 0.1 = 3.1 ; 1*(-1) + 0 + 3*1 + 0.2 = 2.2
        assert!((out.data()[0] - 3.1).abs() < 1e-12);
        assert!((out.data()[1] - 2.2).abs() < 1e-12);

        let zero = Tensor::row_vector(vec![0.0; 3]);
        assert_eq!(dense_forward(&zero, &w, &b).unwrap().data(), b.data());
        assert!(matches!(
            dense_forward(&input, &w, &b),
            Err(Error::Dimension { axis: "features", .. })
        ));
    }

    #[test]
    fn activations() {
        let t = Tensor::row_vector(vec![-1.0, 2.0]);
        assert_eq!(relu(&t).data(), &[0.0, 2.0]);
        assert_eq!(sigmoid_scalar(0.0), 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-30.0..30.0);
            assert!((sigmoid_scalar(-x) - (1.0 - sigmoid_scalar(x))).abs() < 1e-12);
        }
        for x in [-1e4, -800.0, 800.0, 1e4] {
            let s = sigmoid_scalar(x);
            assert!(s > 0.0 && s < 1.0);
        }
    }
}
