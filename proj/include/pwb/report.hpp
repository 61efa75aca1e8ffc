#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace pwb {

using Json = nlohmann::json;

enum class Status { Pass, Fail, Skip };

const char* to_string(Status s);

struct CheckRecord {
  std::string law;
  std::string anchor;
  Status status = Status::Pass;
  Json counterexample;  // null unless the check failed or was skipped
  std::string detail;
  double millis = 0;
};

class Report {
 public:
  void add(CheckRecord r) { records_.push_back(std::move(r)); }
  void pass(std::string law, std::string anchor, std::string detail = {});
  void fail(std::string law, std::string anchor, Json counterexample, std::string detail = {});
  void skip(std::string law, std::string anchor, std::string reason);
  // Records pass when ok, otherwise fail with the given counterexample.
  void check(bool ok, std::string law, std::string anchor, Json counterexample = nullptr, std::string detail = {});
  void append(const Report& other);

  const std::vector<CheckRecord>& records() const { return records_; }
  std::size_t count(Status s) const;
  bool ok() const { return count(Status::Fail) == 0; }
  const CheckRecord* first_failure() const;

  // Timing of every record added after construction of the guard.
  class Timer {
   public:
    explicit Timer(Report& r) : r_(r), start_(r.records_.size()), t0_(std::chrono::steady_clock::now()) {}
    ~Timer();
   private:
    Report& r_;
    std::size_t start_;
    std::chrono::steady_clock::time_point t0_;
  };

 private:
  std::vector<CheckRecord> records_;
};

Json to_json(const CheckRecord& r, bool with_timing);

// Aggregates many samples of one law into a single record; keeps the first
// counterexample.
struct Tally {
  std::string law, anchor;
  std::size_t trials = 0, skipped = 0;
  Json cex;
  bool failed = false;

  Tally(std::string l, std::string a) : law(std::move(l)), anchor(std::move(a)) {}
  void record(bool ok, const std::function<Json()>& cx);
  void emit(Report& r) const;
};

}  // namespace pwb
