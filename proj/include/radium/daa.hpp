#pragma once

#include <cstddef>
#include <deque>
#include <stdexcept>

#include "radium/core_model.hpp"

namespace radium {

class EmptyHistory : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Difficulty plus the most recent `window` block inter-arrival times.
/// A value type: record_block returns a new state.
class ChainState {
 public:
  explicit ChainState(double difficulty, std::size_t window = 2);

  double difficulty() const noexcept { return difficulty_; }
  std::size_t window() const noexcept { return window_; }
  const std::deque<double>& history() const noexcept { return history_; }

  /// Arithmetic mean of the history. Throws EmptyHistory.
  double mean_block_time() const;

  ChainState with_difficulty(double difficulty) const;
  ChainState record_block(double inter_arrival) const;

 private:
  double difficulty_;
  std::size_t window_;
  std::deque<double> history_;
};

/// D T / mean(T_i).
double bitcoin_adjust(const ChainState& state, const ProtocolParams& params);

/// k D / (a mean(T_i)^k). The mean is taken over raw times and then raised
/// to the k-th power.
double radium_adjust(const ChainState& state, const ProtocolParams& params);

}  // namespace radium
