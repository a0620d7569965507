#include "recourse/response_space.hpp"

#include <limits>

#include "recourse/errors.hpp"

namespace recourse {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  if (b != 0 && a > kMax / b) throw CapacityError(what);
  return a * b;
}

std::uint64_t parent_configuration_count(const CausalModel& model, std::size_t i) {
  std::uint64_t c = 1;
  for (std::size_t pa : model.parents(i)) {
    c = checked_mul(c, static_cast<std::uint64_t>(model.cardinality(pa)),
                    "parent configuration count overflows 64-bit integer");
  }
  return c;
}

}  // namespace

std::uint64_t response_count(const CausalModel& model, std::size_t i) {
  if (i >= model.size()) throw DomainError("variable index out of range");
  const auto k = static_cast<std::uint64_t>(model.cardinality(i));
  if (model.parents(i).empty()) return k;
  const std::uint64_t c = parent_configuration_count(model, i);
  std::uint64_t count = 1;
  for (std::uint64_t d = 0; d < c; ++d) {
    count = checked_mul(count, k, "response function count overflows 64-bit integer");
  }
  return count;
}

int eval_response(const CausalModel& model, std::size_t i, std::uint64_t r_i,
                  std::span<const int> pa_values) {
  const auto& parents = model.parents(i);
  if (pa_values.size() != parents.size()) throw DomainError("parent value count mismatch");
  if (r_i >= response_count(model, i)) throw DomainError("response index out of range");
  std::uint64_t pa_index = 0;
  std::uint64_t stride = 1;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    const int card = model.cardinality(parents[k]);
    if (pa_values[k] < 0 || pa_values[k] >= card) throw DomainError("parent state out of range");
    pa_index += static_cast<std::uint64_t>(pa_values[k]) * stride;
    stride *= static_cast<std::uint64_t>(card);
  }
  const auto base = static_cast<std::uint64_t>(model.cardinality(i));
  for (std::uint64_t d = 0; d < pa_index; ++d) r_i /= base;
  return static_cast<int>(r_i % base);
}

ResponseSpace::ResponseSpace(const CausalModel& model) : model_(model) {
  const std::size_t n = model.size();
  counts_.resize(n);
  parent_configs_.resize(n);
  powers_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    counts_[i] = response_count(model, i);
    parent_configs_[i] = parent_configuration_count(model, i);
    const auto k = static_cast<std::uint64_t>(model.cardinality(i));
    auto& pw = powers_[i];
    pw.resize(parent_configs_[i]);
    std::uint64_t acc = 1;
    for (std::uint64_t c = 0; c < parent_configs_[i]; ++c) {
      pw[c] = acc;
      if (c + 1 < parent_configs_[i]) acc *= k;
    }
    total_ = checked_mul(total_, counts_[i], "joint response count overflows 64-bit integer");
  }
}

std::uint64_t ResponseSpace::parent_index(std::size_t i, std::span<const int> x) const {
  std::uint64_t index = 0;
  std::uint64_t stride = 1;
  for (std::size_t pa : model_.parents(i)) {
    index += static_cast<std::uint64_t>(x[pa]) * stride;
    stride *= static_cast<std::uint64_t>(model_.cardinality(pa));
  }
  return index;
}

int ResponseSpace::eval(std::size_t i, std::uint64_t r_i, std::uint64_t pa_index) const {
  const auto k = static_cast<std::uint64_t>(model_.cardinality(i));
  return static_cast<int>((r_i / powers_[i][pa_index]) % k);
}

ResponseDigits ResponseSpace::decode(std::uint64_t r) const {
  if (r >= total_) throw DomainError("joint response index out of range");
  ResponseDigits digits(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    digits[i] = r % counts_[i];
    r /= counts_[i];
  }
  return digits;
}

std::uint64_t ResponseSpace::encode(std::span<const std::uint64_t> digits) const {
  if (digits.size() != counts_.size()) throw DomainError("response digit count mismatch");
  std::uint64_t r = 0;
  std::uint64_t stride = 1;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (digits[i] >= counts_[i]) throw DomainError("response digit out of range");
    r += digits[i] * stride;
    stride *= counts_[i];
  }
  return r;
}

void ResponseSpace::simulate_into(std::span<const std::uint64_t> digits, const Action* action,
                                  std::span<int> out) const {
  const std::size_t n = counts_.size();
  std::size_t next_target = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (action && next_target < action->targets.size() && action->targets[next_target] == i) {
      out[i] = action->values[next_target++];
    } else {
      out[i] = eval(i, digits[i], parent_index(i, out));
    }
  }
}

Configuration ResponseSpace::simulate(std::span<const std::uint64_t> digits,
                                      const Action* action) const {
  if (digits.size() != counts_.size()) throw DomainError("response digit count mismatch");
  Configuration x(counts_.size());
  simulate_into(digits, action, x);
  return x;
}

void ResponseSpace::Cursor::next() {
  ++index_;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (++digits_[i] < space_->count(i)) return;
    digits_[i] = 0;
  }
}

Configuration forward_simulate(const ResponseSpace& space, std::span<const std::uint64_t> digits,
                               const std::optional<Action>& action) {
  if (action) check_action(space.model(), *action, /*allow_empty=*/true);
  return space.simulate(digits, action ? &*action : nullptr);
}

}  // namespace recourse
