#include "pwb/report.hpp"

#include <algorithm>

namespace pwb {

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skip: return "skip";
  }
  return "?";
}

void Report::pass(std::string law, std::string anchor, std::string detail) {
  add({std::move(law), std::move(anchor), Status::Pass, nullptr, std::move(detail), 0});
}

void Report::fail(std::string law, std::string anchor, Json counterexample, std::string detail) {
  if (counterexample.is_null()) counterexample = Json::object();
  add({std::move(law), std::move(anchor), Status::Fail, std::move(counterexample), std::move(detail), 0});
}

void Report::skip(std::string law, std::string anchor, std::string reason) {
  add({std::move(law), std::move(anchor), Status::Skip, nullptr, std::move(reason), 0});
}

void Report::check(bool ok, std::string law, std::string anchor, Json counterexample, std::string detail) {
  if (ok)
    pass(std::move(law), std::move(anchor), std::move(detail));
  else
    fail(std::move(law), std::move(anchor), std::move(counterexample), std::move(detail));
}

void Report::append(const Report& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

std::size_t Report::count(Status s) const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [s](const CheckRecord& r) { return r.status == s; }));
}

const CheckRecord* Report::first_failure() const {
  for (const auto& r : records_)
    if (r.status == Status::Fail) return &r;
  return nullptr;
}

Report::Timer::~Timer() {
  auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  auto n = r_.records_.size() - start_;
  if (n == 0) return;
  for (std::size_t i = start_; i < r_.records_.size(); ++i) r_.records_[i].millis = dt / static_cast<double>(n);
}

Json to_json(const CheckRecord& r, bool with_timing) {
  Json j;
  j["law"] = r.law;
  j["anchor"] = r.anchor;
  j["status"] = to_string(r.status);
  if (!r.counterexample.is_null()) j["counterexample"] = r.counterexample;
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (with_timing) j["ms"] = r.millis;
  return j;
}

void Tally::record(bool ok, const std::function<Json()>& cx) {
  ++trials;
  if (!ok && !failed) {
    failed = true;
    cex = cx ? cx() : Json();
    if (cex.is_null()) cex = Json::object();
  }
}

void Tally::emit(Report& r) const {
  std::string detail = std::to_string(trials) + " samples";
  if (skipped) detail += ", " + std::to_string(skipped) + " resampled or skipped for size";
  if (failed)
    r.fail(law, anchor, cex, detail);
  else if (trials == 0)
    r.skip(law, anchor, "no samples");
  else
    r.pass(law, anchor, detail);
}

}  // namespace pwb
