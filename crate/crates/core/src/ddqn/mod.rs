//! Double Deep-Q Network agent: MLP, Huber loss, Adam, replay memory and
//! ε-greedy action selection over masked action sets.

mod agent;
mod network;
mod optim;
mod policy;
mod replay;

pub use agent::{batch_loss_and_grad, ddqn_target, sync_target, train_batch, Agent, AgentConfig};
pub use network::{ForwardCache, QNetwork};
pub use optim::{huber, Adam};
pub use policy::{epsilon, masked_argmax, select_action};
pub use replay::{ReplayBuffer, Transition};
