// Copyright 2026 The ncfvar Authors.
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

#include "ncfvar/catalog.h"

#include "ncfvar/error.h"

namespace ncfvar {
namespace {

PatternCatalogEntry Entry(PatternClass cls, const char *code, const char *name,
                          const char *title, bool recipe = false) {
  return PatternCatalogEntry{PatternId{cls, name}, code, title, recipe};
}

std::vector<PatternCatalogEntry> BuildCatalog() {
  using enum PatternClass;
  return {
      Entry(kA, "A1.1", "inquiry_user_confirmation", "Inquiry (User) Confirmation"),
      Entry(kA, "A1.2", "inquiry_user_disconfirmation", "Inquiry (User) Disconfirmation"),
      Entry(kA, "A1.3", "inquiry_user_repairs", "Inquiry (User) Repairs"),
      Entry(kA, "A2.2", "open_request_continuer", "Open Request Continuer"),
      Entry(kA, "A2.3", "open_request_screening", "Open Request Screening", true),
      Entry(kA, "A2.5", "open_request_user_detail_request",
            "Open Request User Detail Request", true),
      Entry(kA, "A2.6", "open_request_summary", "Open Request Summary"),
      Entry(kA, "A2.11", "open_request_repairs", "Open Request Repairs"),
      Entry(kA, "A3.0", "extended_telling_with_repair", "Extended Telling with Repair"),
      Entry(kA, "A3.1", "extended_telling_abort", "Extended Telling Abort"),
      Entry(kB, "B1.2.2", "agent_continuer", "Agent Continuer"),
      Entry(kB, "B2.6.0", "example_request", "Example Request", true),
      Entry(kB, "B3.1.1", "misunderstanding_report", "Misunderstanding Report", true),
      Entry(kB, "B3.2.0", "other_correction", "Other-Correction", true),
      Entry(kB, "B4.0", "sequence_closer_helped", "Sequence Closer (helped)"),
      Entry(kB, "B4.1", "sequence_closer_not_helped", "Sequence Closer (not helped)", true),
      Entry(kB, "B4.2", "sequence_closer_appreciation", "Sequence Closer Appreciation"),
      Entry(kB, "B4.4", "sequence_closer_repaired", "Sequence Closer (repaired)", true),
      Entry(kC, "C1.4", "opening_welfare_check_agent", "Opening Welfare Check (Agent)"),
      Entry(kC, "C1.5", "opening_organization_offer_of_help_agent",
            "Opening Organization Offer of Help (Agent)"),
      Entry(kC, "C1.7", "organizational_problem_request_agent",
            "Organizational Problem Request (Agent)"),
      Entry(kC, "C2.1", "summons_user", "Summons (User)"),
      Entry(kC, "C2.2", "welfare_check_user", "Welfare Check (User)"),
      Entry(kC, "C2.9", "name_correction_user", "Name Correction (User)"),
      Entry(kC, "C3.0", "general_capability_check", "General Capability Check"),
      Entry(kC, "C3.1", "capability_expansion", "Capability Expansion", true),
      Entry(kC, "C3.2", "specific_capability_check", "Specific Capability Check"),
      Entry(kC, "C4.7", "closing_success_check_disaffirmed",
            "Closing Success Check (Disaffirmed)"),
      Entry(kC, "C4.8", "closing_success_check_reopened", "Closing Success Check Reopened"),
      Entry(kC, "C4.9", "closing_offer_affirmed", "Closing Offer (Affirmed)"),
      Entry(kC, "C4.10", "closing_offer_disaffirmed", "Closing Offer (Disaffirmed)"),
      Entry(kC, "C5.2", "recipient_correction", "Recipient Correction", true),
  };
}

}  // namespace

const std::vector<PatternCatalogEntry> &list_patterns() {
  static const std::vector<PatternCatalogEntry> catalog = BuildCatalog();
  return catalog;
}

std::optional<PatternCatalogEntry> find_pattern(std::string_view name_or_code) {
  for (const PatternCatalogEntry &e : list_patterns()) {
    if (e.id.name == name_or_code || e.ncf_code == name_or_code) return e;
  }
  return std::nullopt;
}

PatternId pattern_id(std::string_view name_or_code) {
  if (auto e = find_pattern(name_or_code)) return e->id;
  std::string known;
  for (const PatternCatalogEntry &e : list_patterns()) {
    if (!e.has_recipe) continue;
    if (!known.empty()) known += ", ";
    known += e.id.name;
  }
  throw UsageError("unknown pattern '" + std::string(name_or_code) +
                   "'; recipe-bearing patterns: " + known);
}

std::string_view ClassName(PatternClass c) {
  switch (c) {
    case PatternClass::kA: return "A";
    case PatternClass::kB: return "B";
    case PatternClass::kC: return "C";
  }
  return "?";
}

std::string catalog_table() {
  std::string out = "code\tclass\tname\thas_recipe\tdescription\n";
  for (const PatternCatalogEntry &e : list_patterns()) {
    out += e.ncf_code + "\t" + std::string(ClassName(e.id.cls)) + "\t" +
           e.id.name + "\t" + (e.has_recipe ? "yes" : "no") + "\t" +
           e.description + "\n";
  }
  return out;
}

}  // namespace ncfvar
