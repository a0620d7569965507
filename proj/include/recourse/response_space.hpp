#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "recourse/causal_model.hpp"

namespace recourse {

// Per-variable digits r_i of a joint response index r.
using ResponseDigits = std::vector<std::uint64_t>;

// |R_i| = K_i^{C_i} with C_i the number of parent configurations (K_i for roots).
// Throws CapacityError if the count does not fit in 64 bits.
std::uint64_t response_count(const CausalModel& model, std::size_t i);

// m_i(pa, r_i): r_i read as a base-K_i numeral, one digit per parent
// configuration, least significant digit first. pa_values are the parents'
// states in ascending variable order.
int eval_response(const CausalModel& model, std::size_t i, std::uint64_t r_i,
                  std::span<const int> pa_values);

// Response functions for every variable of one model, with the joint index
// r in {0..|R|-1} laid out as a mixed-radix code over (|R_1|..|R_n|).
class ResponseSpace {
 public:
  explicit ResponseSpace(const CausalModel& model);

  const CausalModel& model() const { return model_; }
  std::size_t size() const { return counts_.size(); }
  std::uint64_t count(std::size_t i) const { return counts_.at(i); }
  std::span<const std::uint64_t> counts() const { return counts_; }
  std::uint64_t parent_configurations(std::size_t i) const { return parent_configs_.at(i); }
  std::uint64_t total() const { return total_; }

  // Index of the parents' configuration of variable i, read from a full configuration.
  std::uint64_t parent_index(std::size_t i, std::span<const int> x) const;
  // Output of response function r_i at parent configuration index pa_index.
  int eval(std::size_t i, std::uint64_t r_i, std::uint64_t pa_index) const;

  ResponseDigits decode(std::uint64_t r) const;
  std::uint64_t encode(std::span<const std::uint64_t> digits) const;

  // Propagates in topological order; targets of the action are pinned to theta.
  Configuration simulate(std::span<const std::uint64_t> digits,
                         const Action* action = nullptr) const;
  void simulate_into(std::span<const std::uint64_t> digits, const Action* action,
                     std::span<int> out) const;

  // Odometer over all joint response indices, so |R| is never materialised as a list.
  class Cursor {
   public:
    explicit Cursor(const ResponseSpace& space)
        : space_(&space), digits_(space.size(), 0) {}
    bool valid() const { return index_ < space_->total(); }
    std::uint64_t index() const { return index_; }
    const ResponseDigits& digits() const { return digits_; }
    void next();

   private:
    const ResponseSpace* space_;
    ResponseDigits digits_;
    std::uint64_t index_ = 0;
  };
  Cursor begin() const { return Cursor(*this); }

 private:
  CausalModel model_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> parent_configs_;
  // powers_[i][c] = K_i^c for c < C_i.
  std::vector<std::vector<std::uint64_t>> powers_;
  std::uint64_t total_ = 1;
};

Configuration forward_simulate(const ResponseSpace& space, std::span<const std::uint64_t> digits,
                               const std::optional<Action>& action = std::nullopt);

}  // namespace recourse
