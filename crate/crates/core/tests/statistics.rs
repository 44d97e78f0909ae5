//! Sampling checks against independent statistical oracles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use przi::exchange::{Price, Side};
use przi::prsh::mutate;
use przi::przi::{build_distribution, PriceBounds, StrategyValue};
use przi::traders::{zic_price, ziu_price};

const N: usize = 100_000;

/// Pearson statistic of `samples` against a uniform law on `lo..=hi`, and
/// the chi-square critical value at alpha = 0.01.
fn chi_square_uniform(samples: &[Price], lo: u32, hi: u32) -> (f64, f64) {
    let cells = (hi - lo + 1) as usize;
    let mut counts = vec![0u64; cells];
    for p in samples {
        assert!((lo..=hi).contains(&p.0), "{p} outside [{lo}, {hi}]");
        counts[(p.0 - lo) as usize] += 1;
    }
    let expected = samples.len() as f64 / cells as f64;
    let stat = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new((cells - 1) as f64).unwrap().inverse_cdf(0.99);
    (stat, critical)
}

#[test]
fn ziu_is_uniform_over_the_whole_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples: Vec<Price> = (0..N).map(|_| ziu_price(&mut rng, Price(500))).collect();
    let (stat, critical) = chi_square_uniform(&samples, 1, 500);
    assert!(stat < critical, "chi2 {stat} >= {critical}");
}

#[test]
fn zic_buyer_is_uniform_below_its_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let samples: Vec<Price> = (0..N).map(|_| zic_price(&mut rng, Side::Buy, Price(100), Price(500))).collect();
    let (stat, critical) = chi_square_uniform(&samples, 1, 100);
    assert!(stat < critical, "chi2 {stat} >= {critical}");
}

#[test]
fn zic_seller_stays_between_limit_and_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..N {
        let p = zic_price(&mut rng, Side::Sell, Price(60), Price(500));
        assert!((60..=500).contains(&p.0));
    }
}

#[test]
fn neutral_strategy_samples_every_price_equally() {
    let d = build_distribution(StrategyValue::ZIC, PriceBounds::new(Price(60), Price(100)), Side::Sell);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut counts = [0u64; 41];
    for _ in 0..N {
        counts[(d.sample(rand::Rng::random::<f64>(&mut rng)).0 - 60) as usize] += 1;
    }
    let p = 1.0 / 41.0;
    let sigma = (N as f64 * p * (1.0 - p)).sqrt();
    let z: Vec<f64> = counts.iter().map(|&c| (c as f64 - N as f64 * p).abs() / sigma).collect();
    // 41 independent 3-sigma checks: about 0.11 exceedances are expected
    let outside = z.iter().filter(|&&z| z >= 3.0).count();
    assert!(outside <= 2, "{outside} prices outside 3 sigma: {z:?}");
    assert!(z.iter().all(|&z| z < 4.5), "{z:?}");
    let samples: Vec<Price> = counts
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(Price(60 + i as u32), c as usize))
        .collect();
    let (stat, critical) = chi_square_uniform(&samples, 60, 100);
    assert!(stat < critical, "chi2 {stat} >= {critical}");
}

#[test]
fn mutation_noise_is_centred() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let sigma = 0.01;
    let sum: f64 = (0..N).map(|_| mutate(StrategyValue::ZIC, sigma, &mut rng).get()).sum();
    let mean = sum / N as f64;
    assert!(mean.abs() < 3.0 * sigma / (N as f64).sqrt(), "mean {mean}");
}
