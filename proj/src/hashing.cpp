#include "personamark/hashing.hpp"

#include <sodium.h>

#include <charconv>
#include <fstream>
#include <ctime>
#include <random>

namespace personamark {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}

constexpr char kHex[] = "0123456789abcdef";

}  // namespace

bool valid_user_id(std::string_view id) {
  if (id.empty() || id.size() > 256) return false;
  for (char c : id)
    if (c == '\t' || c == '\n' || c == '\r') return false;
  return true;
}

std::string KeyRecord::salt_hex() const {
  std::string out(32, '0');
  for (std::size_t i = 0; i < salt.size(); ++i) {
    out[2 * i] = kHex[salt[i] >> 4];
    out[2 * i + 1] = kHex[salt[i] & 0xf];
  }
  return out;
}

const KeyRecord& KeyDatabase::register_user(const std::string& user,
                                            std::optional<std::uint64_t> rng_seed,
                                            bool zero_salt) {
  if (!valid_user_id(user)) throw std::invalid_argument("invalid user id: " + user);
  if (records_.count(user)) throw DuplicateUser(user);
  KeyRecord rec;
  rec.user = user;
  if (zero_salt) {
    rec.salt.fill(0);
  } else if (rng_seed) {
    std::mt19937_64 rng(*rng_seed);
    for (std::size_t i = 0; i < rec.salt.size(); i += 8) {
      std::uint64_t v = rng();
      for (std::size_t b = 0; b < 8; ++b)
        rec.salt[i + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
  } else {
    ensure_sodium();
    randombytes_buf(rec.salt.data(), rec.salt.size());
    rec.created_at = static_cast<std::int64_t>(std::time(nullptr));
  }
  return records_.emplace(user, std::move(rec)).first->second;
}

const KeyRecord* KeyDatabase::find(std::string_view user) const {
  auto it = records_.find(std::string(user));
  return it == records_.end() ? nullptr : &it->second;
}

void KeyDatabase::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write key database: " + path);
  out << kKeyDbHeader << '\n';
  for (const auto& [user, rec] : records_)
    out << user << '\t' << rec.salt_hex() << '\t' << rec.created_at << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

KeyDatabase KeyDatabase::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open key database: " + path);
  KeyDatabase db;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != kKeyDbHeader)
        throw MalformedDatabase(path, lineno, "unknown header: " + line);
      continue;
    }
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw MalformedDatabase(path, lineno, "expected user<TAB>salt<TAB>created_at");
    KeyRecord rec;
    rec.user = line.substr(0, t1);
    std::string hex = line.substr(t1 + 1, t2 - t1 - 1);
    if (!valid_user_id(rec.user))
      throw MalformedDatabase(path, lineno, "invalid user id");
    if (hex.size() != 32)
      throw MalformedDatabase(path, lineno, "salt must be 32 hex chars");
    for (std::size_t i = 0; i < 16; ++i) {
      auto nib = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw MalformedDatabase(path, lineno, "non-hex salt character");
      };
      rec.salt[i] = static_cast<std::uint8_t>(nib(hex[2 * i]) << 4 | nib(hex[2 * i + 1]));
    }
    const char* begin = line.data() + t2 + 1;
    const char* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(begin, end, rec.created_at);
    if (ec != std::errc{} || ptr != end)
      throw MalformedDatabase(path, lineno, "bad created_at timestamp");
    if (db.records_.count(rec.user))
      throw MalformedDatabase(path, lineno, "duplicate user " + rec.user);
    db.records_.emplace(rec.user, std::move(rec));
  }
  return db;
}

int structure_bit(const KeyRecord& record, std::string_view serialized) {
  if (serialized.empty()) throw EmptyStructure();
  ensure_sodium();
  std::string msg = record.salt_hex();
  msg += '|';
  msg += record.user;
  msg += '|';
  msg += serialized;
  unsigned char digest[32];
  crypto_generichash(digest, sizeof digest,
                     reinterpret_cast<const unsigned char*>(msg.data()), msg.size(),
                     nullptr, 0);
  return digest[31] & 1;
}

int structure_bit(const KeyRecord& record, const StructureString& structure) {
  return structure_bit(record, structure.serialize());
}

}  // namespace personamark
