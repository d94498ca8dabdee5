import { Component } from '@angular/core';

@Component({
  selector: 'app-unbalanced',
  template: `<span>unbalanced</span>`,
})
// expect: internal/parse-error
export class UnbalancedComponent {
  // expect: internal/parse-error
  run() {
    if (true) {
      console.log('never closed');
  }
