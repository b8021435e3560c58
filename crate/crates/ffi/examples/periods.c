/* Prints the period set of T_5 up to 12.
 *   cargo build -p idl-ffi --release
 *   cc crates/ffi/examples/periods.c -Icrates/ffi/include \
 *      -Ltarget/release -lidl_ffi -o periods && LD_LIBRARY_PATH=target/release ./periods
 */
#include <stdio.h>
#include "idl.h"

int main(void) {
    IdlMap *map = NULL;
    char *report = NULL;
    if (idl_build_tn(5, 0, &map) != IDL_STATUS_OK) {
        fprintf(stderr, "%s\n", idl_last_error_message());
        return 1;
    }
    IdlStatus status = idl_analyze(map, 12, 0, &report);
    if (status != IDL_STATUS_OK) {
        fprintf(stderr, "%s\n", idl_last_error_message());
        idl_map_free(map);
        return 1;
    }
    printf("%s\n", report);
    idl_string_free(report);
    idl_map_free(map);
    return 0;
}
