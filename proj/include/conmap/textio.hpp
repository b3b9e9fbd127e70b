// Copyright 2026 The conmap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef CONMAP_TEXTIO_HPP_
#define CONMAP_TEXTIO_HPP_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "conmap/constraints.hpp"

namespace conmap {

/// Malformed container text. Carries the 1-based line and field.
class ParseError : public RuntimeFailure {
 public:
  ParseError(int line, int field, const std::string& what);
  int line() const { return line_; }
  int field() const { return field_; }

 private:
  int line_;
  int field_;
};

class UnsupportedVersion : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Line-oriented, tab-separated container. Every file opens with
///   conmap <TAB> version <TAB> kind <TAB> hash <TAB> count
/// followed by kind-specific records.
inline constexpr int kContainerVersion = 1;

class TextWriter {
 public:
  explicit TextWriter(std::ostream& os) : os_(os) {}
  TextWriter& field(std::string_view text);
  TextWriter& field(double value);
  TextWriter& field(std::int64_t value);
  TextWriter& field(int value) { return field(std::int64_t(value)); }
  TextWriter& fields(const Eigen::Ref<const Eigen::VectorXd>& v);
  void end_line();

 private:
  std::ostream& os_;
  bool first_ = true;
};

class TextReader {
 public:
  explicit TextReader(std::istream& is) : is_(is) {}

  /// Reads the next line; throws ParseError at end of input.
  void next(std::string_view expected_tag = {});
  bool at_end();
  std::size_t n_fields() const { return fields_.size(); }
  /// Throws unless the current line has exactly n fields.
  void expect_fields(std::size_t n) const;
  std::string_view text();
  double real();
  std::int64_t integer();
  Eigen::VectorXd reals(Eigen::Index n);
  void done() const;  // no fields left on the line
  [[noreturn]] void fail(const std::string& what) const;
  int line() const { return line_no_; }

 private:
  std::string_view take();

  std::istream& is_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::size_t cursor_ = 0;
  int line_no_ = 0;
};

struct ContainerHeader {
  std::string kind;
  std::string hash;
  std::int64_t count = 0;
};

void write_header(TextWriter& w, const ContainerHeader& h);
/// Checks magic, version and kind.
ContainerHeader read_header(TextReader& r, std::string_view kind);

void write_system(TextWriter& w, const SystemSpec& sys);
SystemSpec read_system(TextReader& r);

}  // namespace conmap

#endif  // CONMAP_TEXTIO_HPP_
