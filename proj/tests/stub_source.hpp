// Scripted plan source: emits trees of prescribed widths at fixed intervals.

#pragma once

#include <chrono>
#include <thread>
#include <vector>

#include "zddsynth/planner.hpp"

namespace testkit {

/// No inputs; outputs y_1..y_n each in its own unit clause.
inline zsynth::CnfSpec unit_outputs_spec(std::size_t n) {
  zsynth::CnfSpec s;
  s.num_props = n;
  s.roles.assign(n, zsynth::Role::Output);
  for (zsynth::Prop p = 0; p < n; ++p) s.clauses.push_back({zsynth::Literal::pos(p)});
  s.name = "units";
  return s;
}

/// Valid tree of width exactly w (w >= 1) over unit_outputs_spec(n): the
/// root quantifies y_1..y_w over their leaves, every other output is
/// quantified directly above its own leaf.
inline zsynth::GradedProjectJoinTree tree_of_width(std::size_t n, std::size_t w) {
  using namespace zsynth;
  GradedProjectJoinTree t;
  std::vector<NodeIndex> kids;
  std::vector<Prop> root_label;
  for (Prop p = 0; p < n; ++p) {
    const NodeIndex leaf = t.add_leaf(p);
    if (p < w) {
      kids.push_back(leaf);
      root_label.push_back(p);
    } else {
      kids.push_back(t.add_internal(Grade::Y, {p}, {leaf}));
    }
  }
  t.root = t.add_internal(Grade::Y, root_label, kids);
  return t;
}

class StubSource : public zsynth::PlanSource {
 public:
  StubSource(std::size_t n, std::vector<std::size_t> widths, std::chrono::milliseconds interval)
      : n_(n), widths_(std::move(widths)), interval_(interval),
        start_(std::chrono::steady_clock::now()) {}

  std::optional<zsynth::GradedProjectJoinTree> next(const zsynth::Deadline&,
                                                    std::stop_token stop) override {
    if (next_ >= widths_.size()) return std::nullopt;
    const auto due = start_ + interval_ * static_cast<long>(next_ + 1);
    while (std::chrono::steady_clock::now() < due) {
      if (stop.stop_requested()) return std::nullopt;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return tree_of_width(n_, widths_[next_++]);
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> widths_;
  std::chrono::milliseconds interval_;
  std::chrono::steady_clock::time_point start_;
  std::size_t next_ = 0;
};

}  // namespace testkit
