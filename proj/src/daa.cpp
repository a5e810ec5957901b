#include "radium/daa.hpp"

#include <cmath>
#include <numeric>

namespace radium {

ChainState::ChainState(double difficulty, std::size_t window)
    : difficulty_(difficulty), window_(window) {
  if (!(difficulty > 0.0) || !std::isfinite(difficulty)) {
    throw std::domain_error("ChainState: difficulty must be > 0");
  }
  if (window == 0) throw std::domain_error("ChainState: window must be >= 1");
}

double ChainState::mean_block_time() const {
  if (history_.empty()) throw EmptyHistory("ChainState: no block history");
  return std::accumulate(history_.begin(), history_.end(), 0.0) /
         static_cast<double>(history_.size());
}

ChainState ChainState::with_difficulty(double difficulty) const {
  ChainState next(difficulty, window_);
  next.history_ = history_;
  return next;
}

ChainState ChainState::record_block(double inter_arrival) const {
  if (!(inter_arrival > 0.0) || !std::isfinite(inter_arrival)) {
    throw std::domain_error("record_block: inter-arrival time must be > 0");
  }
  ChainState next = *this;
  next.history_.push_back(inter_arrival);
  while (next.history_.size() > window_) next.history_.pop_front();
  return next;
}

double bitcoin_adjust(const ChainState& state, const ProtocolParams& params) {
  return state.difficulty() * params.target_time() / state.mean_block_time();
}

double radium_adjust(const ChainState& state, const ProtocolParams& params) {
  const double mean = state.mean_block_time();
  return params.k() / (params.a() * std::pow(mean, params.k())) * state.difficulty();
}

}  // namespace radium
