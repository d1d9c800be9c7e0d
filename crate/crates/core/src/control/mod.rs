//! Discrete-time controllers: construction, evaluation on the unit circle,
//! and execution as difference equations.

mod state;
mod transfer;

pub use state::{step_controller, ControllerState, DelayLine};
pub use transfer::{
    controller_pair, discretize, error_sign, eval_transfer, folded_gains, DiscreteTransfer,
};
