// Copyright 2026 The MENID Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "menid/symbols.hpp"

#include <algorithm>
#include <cctype>

#include "menid/errors.hpp"

namespace menid {
namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

void check_term(std::string_view term, std::string_view context) {
  std::string_view body = is_variable(term) ? term.substr(1) : term;
  if (body.empty() || !std::all_of(body.begin(), body.end(), is_ident_char)) {
    throw ParseError("invalid term '" + std::string(term) + "' in '" +
                     std::string(context) + "'");
  }
}

// Reads one predicate starting at `pos`, advancing `pos` past it.
Predicate read_predicate(std::string_view text, std::size_t& pos) {
  const std::size_t start = pos;
  while (pos < text.size() && is_ident_char(text[pos])) ++pos;
  Predicate p;
  p.name = std::string(text.substr(start, pos - start));
  if (p.name.empty()) {
    throw ParseError("expected predicate name in '" + std::string(text) + "'");
  }
  std::size_t look = pos;
  while (look < text.size() && is_space(text[look])) ++look;
  if (look >= text.size() || text[look] != '(') return p;
  pos = look + 1;
  const std::size_t close = text.find(')', pos);
  if (close == std::string_view::npos) {
    throw ParseError("unterminated argument list in '" + std::string(text) + "'");
  }
  std::string_view inner = text.substr(pos, close - pos);
  pos = close + 1;
  if (std::all_of(inner.begin(), inner.end(), is_space)) return p;
  std::size_t from = 0;
  while (true) {
    const std::size_t comma = inner.find(',', from);
    std::string_view raw = inner.substr(
        from, comma == std::string_view::npos ? std::string_view::npos : comma - from);
    while (!raw.empty() && is_space(raw.front())) raw.remove_prefix(1);
    while (!raw.empty() && is_space(raw.back())) raw.remove_suffix(1);
    check_term(raw, text);
    p.args.emplace_back(raw);
    if (comma == std::string_view::npos) break;
    from = comma + 1;
  }
  return p;
}

}  // namespace

bool Predicate::is_ground() const {
  return std::none_of(args.begin(), args.end(),
                      [](const std::string& a) { return is_variable(a); });
}

std::string Predicate::str() const {
  if (args.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  out += ')';
  return out;
}

Predicate parse_predicate(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && is_space(text[pos])) ++pos;
  Predicate p = read_predicate(text, pos);
  while (pos < text.size() && is_space(text[pos])) ++pos;
  if (pos != text.size()) {
    throw ParseError("trailing characters in predicate '" + std::string(text) + "'");
  }
  return p;
}

State::State(Set predicates) : predicates_(std::move(predicates)) {
  for (const auto& p : predicates_) {
    if (!p.is_ground()) {
      throw ParseError("state predicate '" + p.str() + "' is not ground");
    }
  }
}

State::State(std::initializer_list<Predicate> predicates)
    : State(Set(predicates.begin(), predicates.end())) {}

std::vector<std::string> State::constants() const {
  std::set<std::string> out;
  for (const auto& p : predicates_) out.insert(p.args.begin(), p.args.end());
  return {out.begin(), out.end()};
}

std::string State::serialize() const {
  std::string out;
  for (const auto& p : predicates_) {
    if (!out.empty()) out += ' ';
    out += p.str();
  }
  return out;
}

State State::parse(std::string_view text) {
  Set preds;
  std::size_t pos = 0;
  while (true) {
    while (pos < text.size() && (is_space(text[pos]) || text[pos] == ',')) ++pos;
    if (pos >= text.size()) break;
    preds.insert(read_predicate(text, pos));
  }
  return State(std::move(preds));
}

std::vector<std::string> State::to_strings() const {
  std::vector<std::string> out;
  out.reserve(predicates_.size());
  for (const auto& p : predicates_) out.push_back(p.str());
  return out;
}

State State::from_strings(const std::vector<std::string>& items) {
  Set preds;
  for (const auto& s : items) preds.insert(parse_predicate(s));
  return State(std::move(preds));
}

bool includes(const State& state, const State& subset) {
  return std::includes(state.begin(), state.end(), subset.begin(), subset.end());
}

}  // namespace menid
