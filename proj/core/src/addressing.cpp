#include "seedtree/addressing.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstring>
#include <stdexcept>

namespace seedtree {

namespace {

constexpr std::size_t kMaxDigestBytes = 64;

void store_le64(unsigned char* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

// Digest of the 24-byte message LE64(seed) || LE64(item) || LE64(block).
unsigned digest_block(DigestAlgo algo, std::uint64_t seed, ItemId item,
                      std::uint64_t block, unsigned char out[kMaxDigestBytes]) {
  unsigned char msg[24];
  store_le64(msg, seed);
  store_le64(msg + 8, item);
  store_le64(msg + 16, block);
  const EVP_MD* md = algo == DigestAlgo::kSha512 ? EVP_sha512() : EVP_sha256();
  unsigned len = 0;
  if (EVP_Digest(msg, sizeof msg, out, &len, md, nullptr) != 1) {
    throw std::runtime_error("address digest failed");
  }
  return len;
}

}  // namespace

std::string to_string(DigestAlgo algo) {
  return algo == DigestAlgo::kSha512 ? "sha512" : "sha256";
}

DigestAlgo parse_digest_algo(std::string_view name) {
  if (name == "sha512") return DigestAlgo::kSha512;
  if (name == "sha256") return DigestAlgo::kSha256;
  throw std::invalid_argument("unknown digest algorithm: " + std::string(name));
}

int hash_bit(ItemId item, std::uint64_t seed, std::uint64_t index, DigestAlgo algo) {
  const unsigned bits_per_block = algo == DigestAlgo::kSha512 ? 512 : 256;
  unsigned char digest[kMaxDigestBytes];
  digest_block(algo, seed, item, index / bits_per_block, digest);
  const unsigned offset = static_cast<unsigned>(index % bits_per_block);
  return (digest[offset / 8] >> (7 - offset % 8)) & 1;
}

NodeIndex path_node(ItemId item, std::uint64_t seed, std::uint32_t level, DigestAlgo algo) {
  NodeIndex node = kRootNode;
  for (std::uint32_t i = 0; i < level; ++i) {
    node = route_child(node, hash_bit(item, seed, i, algo));
  }
  return node;
}

std::uint64_t AddressProvider::prefix64(ItemId item) const {
  unsigned char digest[kMaxDigestBytes];
  digest_block(algo_, seed_, item, 0, digest);
  std::uint64_t prefix = 0;
  for (int i = 0; i < 8; ++i) prefix = prefix << 8 | digest[i];
  return prefix;
}

}  // namespace seedtree
