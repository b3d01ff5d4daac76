//! Planners for the information-sharing settings.
//!
//! Static planners compute a whole search path when a request comes in.
//! Dynamic ones pick only the next station at every decision epoch.

mod dynamic;
mod static_settings;

pub use dynamic::{
    central_actions, dec_o_d_decide, greedy_base_cost, lhro_decide, rollout_decide, rollout_q_values,
    station_probabilities, RolloutConfig,
};
pub use static_settings::{plan_request, truncate_intentions, PlanOptions, SharedBoard, StaticSetting};
