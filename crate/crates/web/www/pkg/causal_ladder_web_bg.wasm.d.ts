/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const bipartite_distance: (a: number, b: number, c: number) => [number, number, number, number];
export const degree_bound_rows: (a: number) => [number, number, number, number];
export const marginals: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const oracle_text: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const per_query_error_curve: (a: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
