/* Build: cargo build -p powerweight-ffi && cc examples/rank.c -Iinclude ../../target/debug/libpowerweight_ffi.a -lm -lpthread -ldl */
#include <stdio.h>
#include "powerweight.h"

int main(void) {
    const char *corpus =
        "{\"id\":1,\"text\":\"apple banana apple\"}\n"
        "{\"id\":2,\"text\":\"banana cherry\"}\n"
        "{\"id\":3,\"text\":\"apple apple apple cherry date\"}\n";
    PwIndex *index = NULL;
    if (pw_index_from_jsonl(corpus, &index) != PW_STATUS_OK) {
        fprintf(stderr, "ingest: %s\n", pw_last_error());
        return 1;
    }
    PwResults *results = NULL;
    if (pw_rank(index, "apple date", "bm25ir:1.2:0.75", 10, &results) != PW_STATUS_OK) {
        fprintf(stderr, "rank: %s\n", pw_last_error());
        pw_index_free(index);
        return 1;
    }
    for (size_t i = 0; i < pw_results_len(results); i++) {
        uint64_t doc_id;
        double score;
        pw_results_get(results, i, &doc_id, &score);
        printf("%zu\t%llu\t%.6f\n", i + 1, (unsigned long long)doc_id, score);
    }
    double k;
    pw_critical_k(1e-9, &k);
    printf("critical k %.6f\n", k);
    pw_results_free(results);
    pw_index_free(index);
    return 0;
}
