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

#pragma once

#include <compare>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace menid {

// Terms starting with '?' are variables; anything else is a constant.
inline bool is_variable(std::string_view term) {
  return !term.empty() && term.front() == '?';
}

struct Predicate {
  std::string name;
  std::vector<std::string> args;

  bool is_ground() const;
  std::size_t arity() const { return args.size(); }

  // "name(a,b)"; nullary predicates print as the bare name.
  std::string str() const;

  auto operator<=>(const Predicate&) const = default;
  bool operator==(const Predicate&) const = default;
};

// Parses "name(arg, ...)", "name()" or "name". Throws ParseError.
Predicate parse_predicate(std::string_view text);

// A set of ground predicates.
class State {
 public:
  using Set = std::set<Predicate>;

  State() = default;
  explicit State(Set predicates);
  State(std::initializer_list<Predicate> predicates);

  bool contains(const Predicate& p) const { return predicates_.count(p) != 0; }
  const Set& predicates() const { return predicates_; }
  std::size_t size() const { return predicates_.size(); }
  bool empty() const { return predicates_.empty(); }
  Set::const_iterator begin() const { return predicates_.begin(); }
  Set::const_iterator end() const { return predicates_.end(); }

  // Every constant mentioned by some predicate, sorted.
  std::vector<std::string> constants() const;

  // Predicates in canonical order separated by single spaces.
  std::string serialize() const;
  static State parse(std::string_view text);

  std::vector<std::string> to_strings() const;
  static State from_strings(const std::vector<std::string>& items);

  auto operator<=>(const State&) const = default;
  bool operator==(const State&) const = default;

 private:
  Set predicates_;
};

// True iff every predicate of `subset` is in `state`.
bool includes(const State& state, const State& subset);

}  // namespace menid
