/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_trace_free: (a: number, b: number) => void;
export const pi1_curve: (a: number, b: number, c: number) => [number, number, number, number];
export const prr_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: bigint) => [number, number, number, number];
export const trace_cells: (a: number) => [number, number];
export const trace_n_rb: (a: number) => number;
export const trace_prr: (a: number) => number;
export const trace_slots: (a: number) => number;
export const utilization_trace: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
