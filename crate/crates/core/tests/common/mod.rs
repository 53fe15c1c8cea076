#![allow(dead_code)]

use msrom_core::problems::{
    random_prescription, sweep_seed, synth_prescribed, SweepParams, SyntheticInstance,
};

pub fn random_instance(params: &SweepParams, base: u64, rep: u64) -> SyntheticInstance {
    synth_prescribed(&random_prescription(params, sweep_seed(base, rep))).unwrap()
}
