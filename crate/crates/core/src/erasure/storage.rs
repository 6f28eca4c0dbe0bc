//! Inline buffer with heap fallback holding one type-erased object.

use std::mem::{self, MaybeUninit};
use std::ptr::{self, NonNull};

/// Alignment of the inline buffer: the platform's maximum fundamental
/// alignment (`max_align_t`), 16 bytes on every 64-bit target we build for.
pub const MAX_ALIGN: usize = 16;

#[repr(C, align(16))]
struct Buffer<const CAP: usize>([MaybeUninit<u8>; CAP]);

const _: () = assert!(mem::align_of::<Buffer<0>>() == MAX_ALIGN);

impl<const CAP: usize> Buffer<CAP> {
    const fn uninit() -> Self {
        Buffer([MaybeUninit::uninit(); CAP])
    }
}

/// Per-type management operations.
struct ObjectOps {
    drop_inline: unsafe fn(*mut u8),
    drop_boxed: unsafe fn(*mut u8),
    clone_inline: unsafe fn(*const u8, *mut u8),
    clone_boxed: unsafe fn(*const u8) -> NonNull<u8>,
    size: usize,
    type_name: fn() -> &'static str,
}

unsafe fn drop_inline<T>(p: *mut u8) {
    ptr::drop_in_place(p.cast::<T>());
}

unsafe fn drop_boxed<T>(p: *mut u8) {
    drop(Box::from_raw(p.cast::<T>()));
}

unsafe fn clone_inline<T: Clone>(src: *const u8, dst: *mut u8) {
    dst.cast::<T>().write((*src.cast::<T>()).clone());
}

unsafe fn clone_boxed<T: Clone>(src: *const u8) -> NonNull<u8> {
    let boxed = Box::new((*src.cast::<T>()).clone());
    NonNull::new_unchecked(Box::into_raw(boxed)).cast()
}

trait HasOps {
    const OPS: ObjectOps;
}

impl<T: Clone + 'static> HasOps for T {
    const OPS: ObjectOps = ObjectOps {
        drop_inline: drop_inline::<T>,
        drop_boxed: drop_boxed::<T>,
        clone_inline: clone_inline::<T>,
        clone_boxed: clone_boxed::<T>,
        size: mem::size_of::<T>(),
        type_name: std::any::type_name::<T>,
    };
}

/// True if `T` is stored inline in a slot of capacity `CAP`.
pub const fn fits_inline<T, const CAP: usize>() -> bool {
    mem::size_of::<T>() <= CAP && mem::align_of::<T>() <= MAX_ALIGN
}

/// Owns one object of an erased type: inline when it fits in `CAP` bytes,
/// otherwise in a single heap allocation.
pub(crate) struct Slot<const CAP: usize> {
    buf: Buffer<CAP>,
    heap: Option<NonNull<u8>>,
    ops: &'static ObjectOps,
}

// Slots are only ever built from `Send + Sync` values.
unsafe impl<const CAP: usize> Send for Slot<CAP> {}
unsafe impl<const CAP: usize> Sync for Slot<CAP> {}

impl<const CAP: usize> Slot<CAP> {
    pub fn new<T: Clone + Send + Sync + 'static>(value: T) -> Self {
        let ops = &<T as HasOps>::OPS;
        if fits_inline::<T, CAP>() {
            let mut buf = Buffer::uninit();
            // SAFETY: size and alignment were checked against the buffer.
            unsafe { buf.0.as_mut_ptr().cast::<T>().write(value) };
            Slot {
                buf,
                heap: None,
                ops,
            }
        } else {
            let heap = NonNull::from(Box::leak(Box::new(value))).cast();
            Slot {
                buf: Buffer::uninit(),
                heap: Some(heap),
                ops,
            }
        }
    }

    #[inline(always)]
    pub fn as_ptr(&self) -> *const u8 {
        match self.heap {
            Some(p) => p.as_ptr(),
            None => self.buf.0.as_ptr().cast(),
        }
    }

    #[inline(always)]
    pub fn as_mut_ptr(&mut self) -> *mut u8 {
        match self.heap {
            Some(p) => p.as_ptr(),
            None => self.buf.0.as_mut_ptr().cast(),
        }
    }

    pub fn is_inline(&self) -> bool {
        self.heap.is_none()
    }

    /// Size in bytes of the stored object.
    pub fn footprint(&self) -> usize {
        self.ops.size
    }

    pub fn type_name(&self) -> &'static str {
        (self.ops.type_name)()
    }
}

impl<const CAP: usize> Clone for Slot<CAP> {
    fn clone(&self) -> Self {
        match self.heap {
            Some(p) => {
                // SAFETY: `p` holds a live object of the type `ops` was built for.
                let heap = unsafe { (self.ops.clone_boxed)(p.as_ptr()) };
                Slot {
                    buf: Buffer::uninit(),
                    heap: Some(heap),
                    ops: self.ops,
                }
            }
            None => {
                let mut buf = Buffer::uninit();
                // SAFETY: as above; the destination has the same layout as the source.
                unsafe { (self.ops.clone_inline)(self.as_ptr(), buf.0.as_mut_ptr().cast()) };
                Slot {
                    buf,
                    heap: None,
                    ops: self.ops,
                }
            }
        }
    }
}

impl<const CAP: usize> Drop for Slot<CAP> {
    fn drop(&mut self) {
        // SAFETY: the slot owns exactly one live object of the recorded type.
        unsafe {
            match self.heap {
                Some(p) => (self.ops.drop_boxed)(p.as_ptr()),
                None => (self.ops.drop_inline)(self.buf.0.as_mut_ptr().cast()),
            }
        }
    }
}
