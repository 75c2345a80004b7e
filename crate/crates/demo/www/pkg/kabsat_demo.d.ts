/* tslint:disable */
/* eslint-disable */

/**
 * Solves one instance with every available method.
 *
 * The exact row is `null` when enumeration would exceed the demo budget.
 */
export function compare_solvers(text: string, k: number, eps: string, a: number, b: number): string;

/**
 * Random `K_{a,b}`-free instance in DIMACS form.
 */
export function generate_instance(n: number, m: number, a: number, b: number, seed: number): string;

/**
 * Runs the kernel pipeline and returns the report plus the kernel text.
 */
export function kernelize(text: string, k: number, eps: string, a: number, b: number): string;

/**
 * Random `K_{a,b}`-free bipartite graph and a sunflower with `w` petals.
 */
export function sunflower_demo(n_left: number, n_right: number, max_degree: number, a: number, b: number, w: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly compare_solvers: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly generate_instance: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly kernelize: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly sunflower_demo: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
