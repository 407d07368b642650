//! Decibel conversions. Every dB quantity entering the library goes through
//! here so the linear/log boundary lives in one place.

/// Power ratio from decibels.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Watts from dBm.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn wavelength(frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT / frequency_hz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_conversions() {
        assert!((db_to_linear(5.0) - 3.1623).abs() < 1e-4);
        assert!((db_to_linear(-3.0) - 0.5012).abs() < 1e-4);
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(-80.0) - 1e-11).abs() < 1e-25);
    }

    #[test]
    fn round_trips() {
        for x in [-80.0, -3.0, 0.0, 5.0, 30.0] {
            assert!((linear_to_db(db_to_linear(x)) - x).abs() < 1e-12);
            assert!((watts_to_dbm(dbm_to_watts(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn wavelength_at_28_ghz() {
        assert!((wavelength(28e9) - 0.010707).abs() < 1e-6);
    }
}
