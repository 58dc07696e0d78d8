#pragma once

// Per-user binary encoding of structure strings and the key database.
// The bit is the parity of the last byte of a BLAKE2b-256 digest over
// `salt_hex|user_id|structure`, so injection and detection agree by
// construction whenever they share the key record.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "personamark/parsing.hpp"

namespace personamark {

inline constexpr std::string_view kKeyDbHeader = "#personamark-keys-v1";

class DuplicateUser : public std::runtime_error {
 public:
  explicit DuplicateUser(const std::string& user)
      : std::runtime_error("user already registered: " + user) {}
};

class MalformedDatabase : public std::runtime_error {
 public:
  MalformedDatabase(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class EmptyStructure : public std::runtime_error {
 public:
  EmptyStructure() : std::runtime_error("structure serialization is empty") {}
};

bool valid_user_id(std::string_view id);

struct KeyRecord {
  std::string user;
  std::array<std::uint8_t, 16> salt{};
  std::int64_t created_at = 0;

  std::string salt_hex() const;
  bool operator==(const KeyRecord&) const = default;
};

class KeyDatabase {
 public:
  // salt from libsodium's CSPRNG, or derived from rng_seed when given
  // (zero salt when zero_salt is set, reproducing the salt-free scheme).
  const KeyRecord& register_user(const std::string& user,
                                 std::optional<std::uint64_t> rng_seed = std::nullopt,
                                 bool zero_salt = false);

  const KeyRecord* find(std::string_view user) const;
  std::size_t size() const { return records_.size(); }
  const std::map<std::string, KeyRecord>& records() const { return records_; }

  void save(const std::string& path) const;
  static KeyDatabase load(const std::string& path);

  bool operator==(const KeyDatabase&) const = default;

 private:
  std::map<std::string, KeyRecord> records_;
};

// Personalized pseudo-random bit for a serialized structure string.
int structure_bit(const KeyRecord& record, std::string_view serialized_structure);
int structure_bit(const KeyRecord& record, const StructureString& structure);

}  // namespace personamark
