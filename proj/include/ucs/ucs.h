/* C interface to the uncertain-prior compression library. */
#ifndef UCS_UCS_H
#define UCS_UCS_H

#include <stddef.h>
#include <stdint.h>

#if defined(UCS_BUILDING_LIBRARY)
#define UCS_API __attribute__((visibility("default")))
#else
#define UCS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ucs_status {
    UCS_OK = 0,
    UCS_BOTTOM = 1, /* the encoder declined; the codeword is the ⊥ marker */
    UCS_ERR_INVALID_ARGUMENT = 2,
    UCS_ERR_PARSE = 3,
    UCS_ERR_UNIVERSE_MISMATCH = 4,
    UCS_ERR_ZERO_PROBABILITY = 5,
    UCS_ERR_BUDGET_EXHAUSTED = 6,
    UCS_ERR_CAP_EXCEEDED = 7,
    UCS_ERR_MALFORMED_CODEWORD = 8,
    UCS_ERR_DECODE_FAILED = 9,
    UCS_ERR_NO_QUALIFYING_LEADER = 10,
    UCS_ERR_NO_CHAIN_FOUND = 11,
    UCS_ERR_IO = 12,
    UCS_ERR_INTERNAL = 13
} ucs_status;

typedef struct ucs_dist ucs_dist;
typedef struct ucs_codec ucs_codec;

/* {"n": N, "probs": ["num/den", ...]} */
UCS_API ucs_status ucs_dist_from_json(const char* json, ucs_dist** out);
/* kind: "flat" (uses support), "geometric" or "binomial" (use parameter "a/b").
   perm_seed 0 keeps the identity order. */
UCS_API ucs_status ucs_dist_from_family(const char* kind, size_t n, const char* parameter,
                                        size_t support, uint64_t perm_seed, ucs_dist** out);
UCS_API void ucs_dist_free(ucs_dist* d);
UCS_API size_t ucs_dist_size(const ucs_dist* d);
UCS_API double ucs_dist_entropy(const ucs_dist* d);
UCS_API double ucs_dist_capacity(const ucs_dist* d);
UCS_API ucs_status ucs_dist_to_json(const ucs_dist* d, char** out);
UCS_API ucs_status ucs_dist_is_close(const ucs_dist* p, const ucs_dist* q, unsigned delta,
                                     int* out);

typedef struct ucs_codec_config {
    const char* scheme;  /* "simple", "low", "reduced+simple", "reduced+low" */
    unsigned delta;
    const char* epsilon; /* rational string; "0" disables ⊥ */
    uint64_t seed;
    uint64_t index_budget;
} ucs_codec_config;

UCS_API void ucs_codec_config_init(ucs_codec_config* config);
UCS_API ucs_status ucs_codec_new(const ucs_codec_config* config, ucs_codec** out);
UCS_API void ucs_codec_free(ucs_codec* codec);

/* Writes the padded codeword bytes. On UCS_BOTTOM the single ⊥ byte is still returned. */
UCS_API ucs_status ucs_encode(ucs_codec* codec, const ucs_dist* p, uint32_t message,
                              uint8_t** bytes, size_t* len, size_t* bit_length);
UCS_API ucs_status ucs_decode(ucs_codec* codec, const ucs_dist* q, const uint8_t* bytes,
                              size_t len, uint32_t* message);
UCS_API void ucs_bytes_free(uint8_t* bytes);

/* config: {"scheme","n","delta","epsilon","bits","seed","fault_every"} */
UCS_API ucs_status ucs_verify(const char* config_json, char** report_json, char** report_csv);
UCS_API ucs_status ucs_bench(const char* grid_json, char** csv);
/* kind: "unc" or "shift"; method: "exact", "greedy", "frac", "hash". */
UCS_API ucs_status ucs_graph(const char* kind, size_t n, unsigned l, size_t k, const char* method,
                             uint64_t seed, uint64_t budget, char** certificate_json,
                             char** dump_text);

UCS_API void ucs_string_free(char* s);
/* Message for the last failing call on this thread. */
UCS_API const char* ucs_last_error(void);
UCS_API const char* ucs_status_string(ucs_status status);

#ifdef __cplusplus
}
#endif

#endif
