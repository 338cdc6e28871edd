#ifndef ECIE_DWIE_CONVERT_H_
#define ECIE_DWIE_CONVERT_H_

// Converter from the published DWIE annotation files (one JSON object per
// document with character-offset mentions, concepts and relations) to the
// canonical token-level corpus.
//
// Field mapping:
//   content                 tokenized on whitespace and punctuation, with
//                           extra cuts at every mention boundary
//   tags ("train"/"test")   document split
//   concepts[].concept      cluster id (decimal string)
//   concepts[].tags         "type::X" -> X ("type::entity" -> ENTITY, same
//                           for value/other); other tags kept verbatim
//   concepts[].link         string -> KB id, null or absent -> NIL
//   mentions[].begin/end    character offsets, mapped to covering tokens
//   relations[].s/p/o       head concept / type / tail concept
//
// Concepts without mentions are dropped together with their relations.
// Sentences end after '.', '!' or '?' tokens and at line breaks.

#include <filesystem>
#include <vector>

#include "ecie/corpus.h"
#include "json.hpp"

namespace ecie {

struct DwieConversionStats {
  int documents = 0;
  int skipped_documents = 0;  // no "content" (text not downloaded)
  int dropped_concepts = 0;
  int dropped_mentions = 0;   // empty after tokenization, or duplicates
  int dropped_relations = 0;  // endpoint dropped, or head == tail

  DwieConversionStats &operator+=(const DwieConversionStats &other);
};

// Throws Error("DWIE") when "content" is missing or malformed.
Document DocumentFromDwie(const nlohmann::json &object,
                          DwieConversionStats *stats = nullptr);

// `path` is a directory of *.json files (read in name order) or one file.
// Documents without content are skipped and counted.
std::vector<Document> ConvertDwie(const std::filesystem::path &path,
                                  DwieConversionStats *stats = nullptr);

}  // namespace ecie

#endif  // ECIE_DWIE_CONVERT_H_
