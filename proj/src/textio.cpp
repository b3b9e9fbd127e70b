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
#include "conmap/textio.hpp"

#include <charconv>

namespace conmap {

ParseError::ParseError(int line, int field, const std::string& what)
    : RuntimeFailure("line " + std::to_string(line) + ", field " +
                     std::to_string(field) + ": " + what),
      line_(line),
      field_(field) {}

TextWriter& TextWriter::field(std::string_view text) {
  if (!first_) os_ << '\t';
  os_ << text;
  first_ = false;
  return *this;
}

TextWriter& TextWriter::field(double value) {
  return field(std::string_view(format_double(value)));
}

TextWriter& TextWriter::field(std::int64_t value) {
  return field(std::string_view(std::to_string(value)));
}

TextWriter& TextWriter::fields(const Eigen::Ref<const Eigen::VectorXd>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) field(v(i));
  return *this;
}

void TextWriter::end_line() {
  os_ << '\n';
  first_ = true;
}

void TextReader::next(std::string_view expected_tag) {
  if (!std::getline(is_, line_)) {
    ++line_no_;
    fail("unexpected end of input");
  }
  ++line_no_;
  fields_.clear();
  cursor_ = 0;
  std::string_view rest(line_);
  while (true) {
    const auto tab = rest.find('\t');
    fields_.push_back(rest.substr(0, tab));
    if (tab == std::string_view::npos) break;
    rest.remove_prefix(tab + 1);
  }
  if (!expected_tag.empty()) {
    const auto tag = take();
    if (tag != expected_tag)
      fail("expected '" + std::string(expected_tag) + "', found '" +
           std::string(tag) + "'");
  }
}

bool TextReader::at_end() { return is_.peek() == std::char_traits<char>::eof(); }

void TextReader::expect_fields(std::size_t n) const {
  if (fields_.size() != n)
    throw ParseError(line_no_, int(fields_.size()),
                     "expected " + std::to_string(n) + " fields, found " +
                         std::to_string(fields_.size()));
}

std::string_view TextReader::take() {
  if (cursor_ >= fields_.size()) {
    ++cursor_;
    fail("missing field");
  }
  return fields_[cursor_++];
}

std::string_view TextReader::text() { return take(); }

double TextReader::real() {
  const auto t = take();
  try {
    return parse_double(t);
  } catch (const InvalidArgument&) {
    fail("not a number: '" + std::string(t) + "'");
  }
}

std::int64_t TextReader::integer() {
  const auto t = take();
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    fail("not an integer: '" + std::string(t) + "'");
  return v;
}

Eigen::VectorXd TextReader::reals(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = real();
  return v;
}

void TextReader::done() const {
  if (cursor_ != fields_.size())
    throw ParseError(line_no_, int(cursor_) + 1, "unexpected extra fields");
}

void TextReader::fail(const std::string& what) const {
  throw ParseError(line_no_, int(cursor_), what);
}

void write_header(TextWriter& w, const ContainerHeader& h) {
  w.field("conmap").field(kContainerVersion).field(h.kind).field(h.hash)
      .field(h.count);
  w.end_line();
}

ContainerHeader read_header(TextReader& r, std::string_view kind) {
  r.next("conmap");
  const auto version = r.integer();
  if (version != kContainerVersion)
    throw UnsupportedVersion(r.line(), 2,
                             "unsupported container version " +
                                 std::to_string(version));
  ContainerHeader h;
  h.kind = std::string(r.text());
  if (h.kind != kind)
    r.fail("expected a '" + std::string(kind) + "' container, found '" +
           h.kind + "'");
  h.hash = std::string(r.text());
  h.count = r.integer();
  if (h.count < 0) r.fail("negative count");
  r.done();
  return h;
}

void write_system(TextWriter& w, const SystemSpec& sys) {
  w.field("system").field(int(sys.chains.size()))
      .field(int(sys.constraint.grasp_pairs.size()))
      .field(int(sys.constraint.fixed_orientation.size()))
      .field(int(sys.constraint.pose_targets.size()))
      .field(sys.constraint.tol);
  w.end_line();
  for (const auto& c : sys.chains) {
    w.field("chain").field(int(c.dof())).field(c.base_pose.x)
        .field(c.base_pose.y).field(c.base_pose.theta);
    for (double l : c.link_lengths) w.field(l);
    for (const auto& lim : c.joint_limits) w.field(lim.lo).field(lim.hi);
    w.end_line();
  }
  for (const auto& g : sys.constraint.grasp_pairs) {
    w.field("grasp").field(g.i).field(g.j).field(g.desired.x)
        .field(g.desired.y).field(g.desired.theta);
    w.end_line();
  }
  for (const auto& f : sys.constraint.fixed_orientation) {
    w.field("fixed").field(f.chain).field(f.theta);
    w.end_line();
  }
  for (const auto& t : sys.constraint.pose_targets) {
    w.field("target").field(t.chain).field(t.pose.x).field(t.pose.y)
        .field(t.pose.theta).field(int(t.mask.x)).field(int(t.mask.y))
        .field(int(t.mask.theta));
    w.end_line();
  }
}

SystemSpec read_system(TextReader& r) {
  r.next("system");
  const auto n_chains = r.integer(), n_grasp = r.integer(),
             n_fixed = r.integer(), n_target = r.integer();
  SystemSpec sys;
  sys.constraint.tol = r.real();
  r.done();
  if (n_chains < 1 || n_grasp < 0 || n_fixed < 0 || n_target < 0)
    r.fail("invalid system counts");
  for (std::int64_t c = 0; c < n_chains; ++c) {
    r.next("chain");
    const auto n = r.integer();
    if (n < 1 || n > 1000) r.fail("invalid joint count");
    ChainSpec chain;
    const double bx = r.real(), by = r.real(), bt = r.real();
    chain.base_pose = Pose2d(bx, by, bt);
    for (std::int64_t k = 0; k < n; ++k) chain.link_lengths.push_back(r.real());
    for (std::int64_t k = 0; k < n; ++k) {
      const double lo = r.real(), hi = r.real();
      chain.joint_limits.push_back({lo, hi});
    }
    r.done();
    sys.chains.push_back(std::move(chain));
  }
  for (std::int64_t k = 0; k < n_grasp; ++k) {
    r.next("grasp");
    GraspPair g;
    g.i = int(r.integer());
    g.j = int(r.integer());
    const double x = r.real(), y = r.real(), t = r.real();
    g.desired = Pose2d(x, y, t);
    r.done();
    sys.constraint.grasp_pairs.push_back(g);
  }
  for (std::int64_t k = 0; k < n_fixed; ++k) {
    r.next("fixed");
    FixedOrientation f;
    f.chain = int(r.integer());
    f.theta = r.real();
    r.done();
    sys.constraint.fixed_orientation.push_back(f);
  }
  for (std::int64_t k = 0; k < n_target; ++k) {
    r.next("target");
    PoseTarget t;
    t.chain = int(r.integer());
    const double x = r.real(), y = r.real(), th = r.real();
    t.pose = Pose2d(x, y, th);
    t.mask.x = r.integer() != 0;
    t.mask.y = r.integer() != 0;
    t.mask.theta = r.integer() != 0;
    r.done();
    sys.constraint.pose_targets.push_back(t);
  }
  try {
    sys.validate();
  } catch (const InvalidArgument& e) {
    r.fail(std::string("invalid system: ") + e.what());
  }
  return sys;
}

}  // namespace conmap
